fn main() {
    std::process::exit(eigenid::cli::run(std::env::args_os()));
}
