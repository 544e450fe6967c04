fn main() {
    std::process::exit(augscope::cli::run(std::env::args_os()));
}
