fn main() {
    std::process::exit(sandkit::cli::main_entry());
}
