fn main() {
    std::process::exit(nakfade::cli::main_with_args(std::env::args_os()));
}
