fn main() -> std::process::ExitCode {
    speccheck::cli::main()
}
