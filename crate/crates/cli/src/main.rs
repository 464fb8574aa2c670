fn main() {
    std::process::exit(equicert_cli::run(std::env::args_os()));
}
