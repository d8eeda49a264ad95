fn main() {
    // Exit quietly when stdout closes early (`polyexp coeffs | head`) instead
    // of panicking: restore the default SIGPIPE disposition Rust masks.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(polyexp::cli::run_main(std::env::args_os()));
}
