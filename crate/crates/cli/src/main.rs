fn main() {
    std::process::exit(hyperkahler_cli::run(std::env::args_os()));
}
