fn main() {
    std::process::exit(parafermi_jc::run(std::env::args_os()));
}
