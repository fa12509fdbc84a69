fn main() {
    std::process::exit(bochner_lab::cli::main_with_args(std::env::args_os()));
}
