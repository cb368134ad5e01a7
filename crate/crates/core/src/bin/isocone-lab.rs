fn main() {
    std::process::exit(isocone_lab::cli::run(std::env::args_os()));
}
