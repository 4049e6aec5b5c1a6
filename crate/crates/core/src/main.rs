fn main() {
    std::process::exit(qtcodes::workbench::run());
}
