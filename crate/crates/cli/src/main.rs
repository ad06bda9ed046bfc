fn main() {
    std::process::exit(sadslab_cli::run(std::env::args_os()));
}
