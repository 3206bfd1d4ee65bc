fn main() {
    std::process::exit(chainrecon::cli::run(std::env::args_os()));
}
