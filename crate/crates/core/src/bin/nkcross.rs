fn main() {
    std::process::exit(nkcross::cli::main_with_args(std::env::args_os()));
}
