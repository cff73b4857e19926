fn main() {
    std::process::exit(twisted_gpt::cli::cli_main(std::env::args_os()));
}
