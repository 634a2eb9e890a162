fn main() {
    std::process::exit(ballfourier_cli::run(std::env::args_os()));
}
