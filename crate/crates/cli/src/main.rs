fn main() {
    std::process::exit(qcorr_cli::run(std::env::args_os()));
}
