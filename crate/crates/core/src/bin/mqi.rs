fn main() {
    std::process::exit(mqi::cli::run(std::env::args_os()));
}
