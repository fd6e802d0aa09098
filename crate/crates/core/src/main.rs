fn main() {
    std::process::exit(kronlow::cli::run(std::env::args_os()));
}
