fn main() {
    std::process::exit(tubedyn_cli::run(std::env::args_os()));
}
