fn main() {
    std::process::exit(sphroots::cli::run());
}
