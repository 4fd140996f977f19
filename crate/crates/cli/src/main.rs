fn main() {
    std::process::exit(nlho_cli::main_with(std::env::args_os()));
}
