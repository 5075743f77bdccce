fn main() {
    std::process::exit(qbos::cli::main_with_args(std::env::args_os()));
}
