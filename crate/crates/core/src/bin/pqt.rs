fn main() {
    std::process::exit(pqt::harness::cli::main_with(std::env::args_os()));
}
