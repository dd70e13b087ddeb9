fn main() {
    // die quietly on closed pipes (`freemax ... | head`), like other
    // line-oriented tools
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    std::process::exit(freemax::cli::run(std::env::args_os()));
}
