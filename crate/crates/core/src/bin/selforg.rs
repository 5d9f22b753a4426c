fn main() -> std::process::ExitCode {
    selforg::cli::main()
}
