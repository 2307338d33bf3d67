fn main() {
    std::process::exit(prefix_codes::cli::run(std::env::args_os()));
}
