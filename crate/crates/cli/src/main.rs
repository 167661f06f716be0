fn main() {
    let code = hyperiso_cli::cli_main(std::env::args());
    std::process::exit(code);
}
