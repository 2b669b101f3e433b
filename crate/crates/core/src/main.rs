fn main() {
    std::process::exit(mlcore::cli::run(std::env::args_os()));
}
