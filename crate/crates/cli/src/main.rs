fn main() {
    std::process::exit(rsel_cli::main_with(std::env::args_os()));
}
