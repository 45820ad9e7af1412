fn main() {
    std::process::exit(green_ideals::cli::run(std::env::args_os()));
}
