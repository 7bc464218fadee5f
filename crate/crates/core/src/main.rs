fn main() {
    std::process::exit(ietlab::cli::main());
}
