fn main() {
    std::process::exit(randset::cli::main_with_args(std::env::args_os()));
}
