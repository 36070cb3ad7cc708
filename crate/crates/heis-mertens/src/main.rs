fn main() {
    std::process::exit(heis_mertens::cli::main_with(std::env::args_os()));
}
