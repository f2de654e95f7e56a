fn main() -> std::process::ExitCode {
    sgplan_cli::main()
}
