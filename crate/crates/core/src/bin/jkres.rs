fn main() {
    std::process::exit(jkres::cli::main_with_args(std::env::args_os()));
}
