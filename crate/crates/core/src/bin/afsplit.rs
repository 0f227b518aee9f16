fn main() {
    std::process::exit(afsplit::cli::run_cli(std::env::args_os()));
}
