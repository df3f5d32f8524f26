//! The `.scx` text format: one facet per line as space-separated vertex
//! ids, `#` starts a comment line. The complex is the downward closure of
//! all lines; the writer emits maximal faces in lexicographic order.

use std::io::{BufRead, Write};

use crate::complex::{SimplicialComplex, Vertex};
use crate::error::{Error, Result};

pub fn parse(text: &str) -> Result<SimplicialComplex> {
    read(text.as_bytes())
}

pub fn read<R: BufRead>(reader: R) -> Result<SimplicialComplex> {
    let mut facets: Vec<Vec<Vertex>> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::malformed(format!("read error: {e}")))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let facet = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<Vertex>()
                    .map_err(|_| Error::malformed(format!("line {}: bad vertex id {tok:?}", lineno + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        facets.push(facet);
    }
    SimplicialComplex::from_facets(facets, None)
}

pub fn write<W: Write>(complex: &SimplicialComplex, mut out: W) -> std::io::Result<()> {
    for facet in complex.facets() {
        let line: Vec<String> = facet.vertices().iter().map(|v| v.to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn to_string(complex: &SimplicialComplex) -> String {
    let mut buf = Vec::new();
    write(complex, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("ascii output")
}
