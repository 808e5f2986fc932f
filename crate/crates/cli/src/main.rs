fn main() {
    std::process::exit(convabuse_cli::run());
}
