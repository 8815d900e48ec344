fn main() {
    std::process::exit(pathsense::cli::run(std::env::args_os()));
}
