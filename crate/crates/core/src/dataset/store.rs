use std::fs;
use std::io::Write;
use std::path::Path;

use super::{DatasetError, LabeledImage};
use crate::imaging::{encode_pgm, load_pgm};
use crate::SymbolClass;

/// Index file mapping image files to labels, one `<file>\t<label>` per line.
pub const INDEX_FILE: &str = "labels.tsv";

/// Writes `<id>.pgm` for every sample plus the index, creating `dir`.
pub fn save_dir(data: &[LabeledImage], dir: &Path) -> Result<(), DatasetError> {
    fs::create_dir_all(dir)?;
    let mut index = String::new();
    for s in data {
        let file = format!("{}.pgm", s.id);
        fs::write(dir.join(&file), encode_pgm(&s.image))?;
        index.push_str(&format!("{file}\t{}\n", s.label.name()));
    }
    fs::File::create(dir.join(INDEX_FILE))?.write_all(index.as_bytes())?;
    Ok(())
}

/// Reads every image listed in the index, in index order.
pub fn load_dir(dir: &Path) -> Result<Vec<LabeledImage>, DatasetError> {
    let index_path = dir.join(INDEX_FILE);
    if !index_path.is_file() {
        return Err(DatasetError::MissingIndex(dir.to_path_buf()));
    }
    let index = fs::read_to_string(&index_path)?;
    let mut out = Vec::new();
    for (n, line) in index.lines().enumerate() {
        let line_no = n + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (file, label) = line
            .split_once('\t')
            .ok_or(DatasetError::MalformedIndex { line: line_no })?;
        let label: SymbolClass = label.parse().map_err(|_| DatasetError::UnknownLabel {
            line: line_no,
            label: label.to_owned(),
        })?;
        let path = dir.join(file);
        let unreadable = |reason: String| DatasetError::UnreadableImage {
            file: path.clone(),
            reason,
        };
        let bytes = fs::read(&path).map_err(|e| unreadable(e.to_string()))?;
        let image = load_pgm(&bytes).map_err(|e| unreadable(e.to_string()))?;
        let id = Path::new(file)
            .file_stem()
            .map_or_else(|| file.to_owned(), |s| s.to_string_lossy().into_owned());
        out.push(LabeledImage { image, label, id });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::imaging::GrayImage;

    fn sample(id: &str, label: SymbolClass, v: u8) -> LabeledImage {
        LabeledImage {
            image: GrayImage::new(3, 2, vec![v, 0, 255, 9, v, 1]).unwrap(),
            label,
            id: id.to_owned(),
        }
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let data = vec![
            sample("a", SymbolClass::Up, 3),
            sample("b", SymbolClass::RotateLeft, 40),
            sample("c", SymbolClass::ForwardRight, 200),
        ];
        save_dir(&data, dir.path()).unwrap();
        assert_eq!(load_dir(dir.path()).unwrap(), data);
    }

    #[test]
    fn index_errors() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            load_dir(dir.path()),
            Err(DatasetError::MissingIndex(_))
        ));

        save_dir(&[sample("a", SymbolClass::Up, 1)], dir.path()).unwrap();
        fs::write(dir.path().join(INDEX_FILE), "a.pgm\tup\nghost.pgm\tdown\n").unwrap();
        match load_dir(dir.path()) {
            Err(DatasetError::UnreadableImage { file, .. }) => {
                assert!(file.ends_with("ghost.pgm"))
            }
            other => panic!("{other:?}"),
        }

        fs::write(dir.path().join(INDEX_FILE), "a.pgm\tsideways\n").unwrap();
        assert!(matches!(
            load_dir(dir.path()),
            Err(DatasetError::UnknownLabel { line: 1, .. })
        ));

        fs::write(dir.path().join(INDEX_FILE), "a.pgm up\n").unwrap();
        assert!(matches!(
            load_dir(dir.path()),
            Err(DatasetError::MalformedIndex { line: 1 })
        ));
    }
}
