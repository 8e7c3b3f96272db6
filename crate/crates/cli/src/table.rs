//! Knot-table ingestion: `name<TAB>code` per line, `#` comments allowed.

use anyhow::{bail, Context, Result};
use std::collections::BTreeSet;
use std::path::Path;
use vknot_core::GaussDiagram;

/// Loads a knot table, preserving file order.  Lines are
/// `name<TAB>gauss_code`; blank lines and lines starting with `#` are
/// skipped.  Duplicate names and malformed lines are rejected with their
/// line number.
pub fn load_table(path: &Path) -> Result<Vec<(String, GaussDiagram)>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((name, code)) = line.split_once(['\t', ' ']) else {
            bail!("{}:{lineno}: expected `name<TAB>code`", path.display());
        };
        let name = name.trim().to_string();
        if name.is_empty() {
            bail!("{}:{lineno}: empty knot name", path.display());
        }
        if !seen.insert(name.clone()) {
            bail!("{}:{lineno}: duplicate knot name {name:?}", path.display());
        }
        let diagram = GaussDiagram::parse_gauss_code(code.trim())
            .map_err(|e| anyhow::anyhow!("{}:{lineno}: {e}", path.display()))?;
        out.push((name, diagram));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn three_line_file_gives_three_records_in_order() {
        let f = write_temp("a\tO1+U1+\nb\tO1+O2+U1+U2+\nc\tO1-U1-\n");
        let rows = load_table(f.path()).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0].0, "a");
        assert_eq!(rows[1].0, "b");
        assert_eq!(rows[2].0, "c");
    }

    #[test]
    fn empty_file_gives_empty_list() {
        let f = write_temp("# just a comment\n\n");
        assert!(load_table(f.path()).unwrap().is_empty());
    }

    #[test]
    fn malformed_line_two_cites_line_two() {
        let f = write_temp("a\tO1+U1+\nO3+++garbage\n");
        let err = load_table(f.path()).unwrap_err().to_string();
        assert!(err.contains(":2:"), "error should cite line 2, got {err}");
    }

    #[test]
    fn duplicate_names_are_rejected() {
        let f = write_temp("a\tO1+U1+\na\tO1-U1-\n");
        let err = load_table(f.path()).unwrap_err().to_string();
        assert!(err.contains("duplicate"), "got {err}");
    }
}
