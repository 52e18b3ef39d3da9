fn main() -> std::process::ExitCode {
    hpl::cli::main()
}
