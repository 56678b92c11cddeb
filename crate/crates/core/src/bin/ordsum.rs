fn main() {
    std::process::exit(ordsum::cli::run(std::env::args_os()));
}
