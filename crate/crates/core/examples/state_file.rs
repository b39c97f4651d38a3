//! Writing a state to JSON and reading it back. The same format is what the
//! `fockent` binary loads with `--state`.

use fockent::measures::site_entropy;
use fockent::{FockOp, FockSpace, StateFile, Statistics};

pub fn main() -> Result<(), Box<dyn std::error::Error>> {
    let space = FockSpace::two_site(Statistics::Fermion);
    let singlet = (FockOp::create(0) * FockOp::create(3) - FockOp::create(1) * FockOp::create(2)).build(&space)?;

    let json = StateFile::from_state(&singlet).to_json();
    println!("{json}");

    let dir = std::env::temp_dir().join("fockent-example");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("singlet.json");
    std::fs::write(&path, &json)?;

    let (loaded, norm) = StateFile::from_json(&std::fs::read_to_string(&path)?)?.to_state()?;
    println!("norm in file {norm:.4}, S(B) = {:.4}", site_entropy(&loaded, "B")?.total_entropy);
    println!("try: cargo run -- measure --state {}", path.display());
    Ok(())
}
