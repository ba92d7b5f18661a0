fn main() {
    std::process::exit(elastica_cli::run(std::env::args_os()));
}
