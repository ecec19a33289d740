fn main() {
    std::process::exit(frobsplit_cli::dispatch(std::env::args_os()));
}
