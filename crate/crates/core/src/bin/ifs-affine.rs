fn main() {
    std::process::exit(ifs_affine::cli::run(std::env::args_os()));
}
