fn main() {
    std::process::exit(arclab::cli::main());
}
