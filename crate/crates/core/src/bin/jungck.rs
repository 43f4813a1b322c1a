fn main() {
    std::process::exit(jungck::cli::main_with_env());
}
