fn main() {
    std::process::exit(ctap::cli::cli_main(std::env::args_os()));
}
