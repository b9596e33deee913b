// SPDX-License-Identifier: Apache-2.0

fn main() {
    let args: Vec<String> = std::env::args().collect();
    std::process::exit(monocert::cli::run(&args));
}
