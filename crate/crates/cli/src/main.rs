fn main() {
    std::process::exit(brownlab_cli::run(std::env::args_os()));
}
