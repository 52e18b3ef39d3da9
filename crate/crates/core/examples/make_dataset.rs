//! Writes a small labelled dataset to a directory and reads it back.
//!
//!     cargo run -p hpl-core --example make_dataset -- [dir]

use hpl_core::dataset::{gen_dataset, load_dir, save_dir, split, SplitConfig, INDEX_FILE};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| "arrows".into());
    let data = gen_dataset(10, 42, 128)?;
    save_dir(&data, dir.as_ref())?;
    println!("wrote {} images and {dir}/{INDEX_FILE}", data.len());

    let back = load_dir(dir.as_ref())?;
    let (train, test) = split(back, &SplitConfig::default())?;
    println!(
        "{} train / {} test after a stratified 60/40 split",
        train.len(),
        test.len()
    );
    Ok(())
}
