fn main() {
    std::process::exit(skyrmion_workbench::cli::run());
}
