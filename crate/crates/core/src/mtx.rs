//! Matrix Market I/O.
//!
//! Sparse matrices use the `coordinate` layout with 1-based indices, written
//! in `(row, col)` order. Boolean matrices use the `pattern` field, all other
//! domains `integer`. Dense matrices use the `array` layout (column-major, as
//! the format prescribes).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;
use crate::scalar::Semiring;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Layout {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Field {
    Integer,
    Pattern,
}

fn field_for<D: Semiring>(dom: &D) -> &'static str {
    if dom.name() == "bool" {
        "pattern"
    } else {
        "integer"
    }
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

struct Header {
    layout: Layout,
    field: Field,
    rows: usize,
    cols: usize,
    nnz: usize,
}

/// Reads the banner and size line, returning the header and the remaining
/// data lines with their line numbers.
fn read_header<R: Read>(reader: R) -> Result<(Header, Vec<(usize, String)>)> {
    let mut lines = BufReader::new(reader).lines().enumerate().map(|(n, l)| (n + 1, l));
    let (_, banner) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let banner = banner?;
    let tokens: Vec<String> = banner.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(parse_err(1, format!("not a Matrix Market banner: {banner:?}")));
    }
    let layout = match tokens[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(parse_err(1, format!("unsupported layout {other}"))),
    };
    let field = match tokens[3].as_str() {
        "integer" => Field::Integer,
        "pattern" if layout == Layout::Coordinate => Field::Pattern,
        other => return Err(parse_err(1, format!("unsupported field {other}"))),
    };
    if tokens[4] != "general" {
        return Err(parse_err(1, format!("unsupported symmetry {}", tokens[4])));
    }

    let mut data = Vec::new();
    let mut size: Option<(usize, Vec<usize>)> = None;
    for (n, line) in lines {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('%') {
            continue;
        }
        if size.is_none() {
            let nums = t
                .split_whitespace()
                .map(|s| s.parse::<usize>().map_err(|e| parse_err(n, format!("bad size line: {e}"))))
                .collect::<Result<Vec<_>>>()?;
            size = Some((n, nums));
        } else {
            data.push((n, t.to_string()));
        }
    }
    let (n, nums) = size.ok_or_else(|| parse_err(1, "missing size line"))?;
    let header = match (layout, nums.as_slice()) {
        (Layout::Coordinate, &[rows, cols, nnz]) => Header {
            layout,
            field,
            rows,
            cols,
            nnz,
        },
        (Layout::Array, &[rows, cols]) => Header {
            layout,
            field,
            rows,
            cols,
            nnz: rows * cols,
        },
        _ => return Err(parse_err(n, "size line has the wrong number of fields")),
    };
    if data.len() != header.nnz {
        return Err(parse_err(
            n,
            format!("size line declares {} entries, found {}", header.nnz, data.len()),
        ));
    }
    Ok((header, data))
}

fn parse_value<D: Semiring>(dom: &D, text: &str, line: usize) -> Result<D::Elem> {
    dom.parse(text).map_err(|e| match e {
        Error::Parse { message, .. } => parse_err(line, message),
        Error::ValueOutsideDomain { value, domain } => {
            parse_err(line, format!("value {value} is not an element of the {domain} domain"))
        }
        other => other,
    })
}

pub fn read_sparse<D: Semiring, R: Read>(dom: &D, reader: R) -> Result<SparseMatrix<D::Elem>> {
    let (h, data) = read_header(reader)?;
    if h.layout == Layout::Array {
        return Ok(SparseMatrix::from_dense(dom, &dense_from_array(dom, &h, &data)?));
    }
    let mut ts = Vec::with_capacity(data.len());
    for (n, line) in &data {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let want = if h.field == Field::Pattern { 2 } else { 3 };
        if fields.len() != want {
            return Err(parse_err(*n, format!("expected {want} fields, found {}", fields.len())));
        }
        let idx = |s: &str| -> Result<usize> {
            let v = s.parse::<usize>().map_err(|e| parse_err(*n, format!("bad index {s:?}: {e}")))?;
            v.checked_sub(1).ok_or_else(|| parse_err(*n, "indices are 1-based"))
        };
        let (i, j) = (idx(fields[0])?, idx(fields[1])?);
        if i >= h.rows || j >= h.cols {
            return Err(parse_err(*n, format!("entry ({}, {}) outside {}x{}", i + 1, j + 1, h.rows, h.cols)));
        }
        let v = match h.field {
            Field::Pattern => dom.one(),
            Field::Integer => parse_value(dom, fields[2], *n)?,
        };
        ts.push((i, j, v));
    }
    SparseMatrix::from_triplets(dom, h.rows, h.cols, ts)
}

fn dense_from_array<D: Semiring>(dom: &D, h: &Header, data: &[(usize, String)]) -> Result<DenseMatrix<D::Elem>> {
    let mut out = DenseMatrix::filled(h.rows, h.cols, dom.zero());
    for (p, (n, line)) in data.iter().enumerate() {
        let v = parse_value(dom, line, *n)?;
        // Column-major.
        out.set(p % h.rows.max(1), p / h.rows.max(1), v);
    }
    Ok(out)
}

pub fn read_dense<D: Semiring, R: Read>(dom: &D, reader: R) -> Result<DenseMatrix<D::Elem>> {
    let (h, data) = read_header(reader)?;
    match h.layout {
        Layout::Array => dense_from_array(dom, &h, &data),
        Layout::Coordinate => {
            let sparse = read_sparse(dom, format_header_back(&h, &data).as_bytes())?;
            Ok(sparse.to_dense(dom))
        }
    }
}

fn format_header_back(h: &Header, data: &[(usize, String)]) -> String {
    let field = if h.field == Field::Pattern { "pattern" } else { "integer" };
    let mut s = format!("%%MatrixMarket matrix coordinate {field} general\n{} {} {}\n", h.rows, h.cols, h.nnz);
    for (_, l) in data {
        s.push_str(l);
        s.push('\n');
    }
    s
}

pub fn write_sparse<D: Semiring, W: Write>(dom: &D, m: &SparseMatrix<D::Elem>, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    let field = field_for(dom);
    writeln!(w, "%%MatrixMarket matrix coordinate {field} general")?;
    writeln!(w, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
    for (i, j, v) in m.entries() {
        if field == "pattern" {
            writeln!(w, "{} {}", i + 1, j + 1)?;
        } else {
            writeln!(w, "{} {} {}", i + 1, j + 1, dom.format(v))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_dense<D: Semiring, W: Write>(dom: &D, m: &DenseMatrix<D::Elem>, writer: W) -> Result<()> {
    let mut w = BufWriter::new(writer);
    writeln!(w, "%%MatrixMarket matrix array integer general")?;
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    for j in 0..m.cols() {
        for i in 0..m.rows() {
            writeln!(w, "{}", dom.format(m.get(i, j)))?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn read_sparse_file<D: Semiring>(dom: &D, path: impl AsRef<Path>) -> Result<SparseMatrix<D::Elem>> {
    read_sparse(dom, File::open(path)?)
}

pub fn write_sparse_file<D: Semiring>(dom: &D, m: &SparseMatrix<D::Elem>, path: impl AsRef<Path>) -> Result<()> {
    write_sparse(dom, m, File::create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Boolean, Integer, ZMod};
    use proptest::prelude::*;

    #[test]
    fn reads_coordinate_integer() {
        let text = "%%MatrixMarket matrix coordinate integer general\n% comment\n2 3 3\n2 3 -4\n1 1 5\n1 1 1\n";
        let m = read_sparse(&Integer, text.as_bytes()).unwrap();
        assert_eq!(m.to_triplets(), vec![(0, 0, 6), (1, 2, -4)]);
    }

    #[test]
    fn pattern_for_boolean() {
        let m = SparseMatrix::from_triplets(&Boolean, 2, 2, vec![(1, 0, true)]).unwrap();
        let mut buf = Vec::new();
        write_sparse(&Boolean, &m, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "%%MatrixMarket matrix coordinate pattern general\n2 2 1\n2 1\n");
        assert_eq!(read_sparse(&Boolean, text.as_bytes()).unwrap(), m);
    }

    #[test]
    fn boolean_rejects_two_in_integer_field() {
        let text = "%%MatrixMarket matrix coordinate integer general\n1 1 1\n1 1 2\n";
        assert!(matches!(read_sparse(&Boolean, text.as_bytes()), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn malformed_inputs() {
        for text in [
            "",
            "%%MatrixMarket matrix coordinate real general\n1 1 0\n",
            "%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 1 1\n",
            "%%MatrixMarket matrix coordinate integer general\n2 2 1\n3 1 1\n",
            "%%MatrixMarket matrix coordinate integer general\n2 2 1\n0 1 1\n",
        ] {
            assert!(read_sparse(&Integer, text.as_bytes()).is_err(), "{text:?}");
        }
    }

    #[test]
    fn dense_array_is_column_major() {
        let d = DenseMatrix::from_rows(vec![vec![1i64, 2, 3], vec![4, 5, 6]]).unwrap();
        let mut buf = Vec::new();
        write_dense(&Integer, &d, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("%%MatrixMarket matrix array integer general\n2 3\n1\n4\n2\n"));
        assert_eq!(read_dense(&Integer, text.as_bytes()).unwrap(), d);
        let s = read_sparse(&Integer, text.as_bytes()).unwrap();
        assert_eq!(s.nnz(), 6);
    }

    proptest! {
        #[test]
        fn sparse_round_trip(ts in proptest::collection::vec((0usize..7, 0usize..5, 0u64..5), 0..30)) {
            let z5 = ZMod::new(5).unwrap();
            let m = SparseMatrix::from_triplets(&z5, 7, 5, ts).unwrap();
            let mut buf = Vec::new();
            write_sparse(&z5, &m, &mut buf).unwrap();
            prop_assert_eq!(read_sparse(&z5, buf.as_slice()).unwrap(), m);
        }
    }
}
