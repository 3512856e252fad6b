use std::io::{stderr, stdout};
use std::process::exit;

fn main() {
    exit(virasoro_core::cli::run(
        std::env::args_os(),
        &mut stdout().lock(),
        &mut stderr().lock(),
    ));
}
