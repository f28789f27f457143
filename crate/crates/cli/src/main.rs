fn main() {
    std::process::exit(colmez_cli::run(std::env::args_os()));
}
