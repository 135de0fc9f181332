fn main() {
    std::process::exit(entropy_lab::cli::run(std::env::args_os()));
}
