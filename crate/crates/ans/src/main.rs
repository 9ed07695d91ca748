fn main() -> std::process::ExitCode {
    ans::cli::main()
}
