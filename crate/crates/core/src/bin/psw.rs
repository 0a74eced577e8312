use std::process::exit;

fn main() {
    exit(psw::cli::dispatch(std::env::args_os()));
}
