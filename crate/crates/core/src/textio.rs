//! Line-oriented text formats: FIELD, MATRIX, CODE, GPTPUB and GPTSEC blocks.
//!
//! ```text
//! GPTPUB
//! FIELD q=2 m=12 mod=1,0,0,1,0,1,0,0,0,0,0,0,1
//! n=12 lambda=2 k=4 t=4
//! MATRIX rows=4 cols=14 field=ext
//! 010011000101 ...
//! ```
//!
//! Blank lines are ignored. A matrix with zero columns has no body lines.

use crate::codes::{GabidulinCode, HiddenCode, TwistedGabidulinCode};
use crate::error::{Error, Result};
use crate::field::{parse_int, parse_list, ExtField, FieldElement, FieldOps, FieldParams};
use crate::gpt::{GptPublicKey, GptSecretKey};
use crate::matrix::Matrix;

/// Cursor over the non-blank lines of a document.
pub struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = &'a str> + 'a>>,
}

impl<'a> Lines<'a> {
    pub fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = &'a str> + 'a> =
            Box::new(text.lines().map(str::trim).filter(|l| !l.is_empty()));
        Self { inner: it.peekable() }
    }

    pub fn peek(&mut self) -> Option<&'a str> {
        self.inner.peek().copied()
    }

    pub fn next_line(&mut self, what: &str) -> Result<&'a str> {
        self.inner.next().ok_or_else(|| Error::Parse(format!("unexpected end of input, expected {what}")))
    }

    pub fn expect(&mut self, keyword: &str) -> Result<()> {
        let line = self.next_line(keyword)?;
        if line != keyword {
            return Err(Error::Parse(format!("expected `{keyword}`, got `{line}`")));
        }
        Ok(())
    }

    pub fn finish(&mut self) -> Result<()> {
        match self.peek() {
            None => Ok(()),
            Some(l) => Err(Error::Parse(format!("trailing input `{l}`"))),
        }
    }
}

/// Splits `key=value` tokens after a leading keyword.
fn key_values<'a>(line: &'a str, keyword: &str) -> Result<Vec<(&'a str, &'a str)>> {
    match line.split_once(' ') {
        Some((head, rest)) if head == keyword => pairs(rest),
        _ if line == keyword => Ok(Vec::new()),
        _ => Err(Error::Parse(format!("expected {keyword} line, got `{line}`"))),
    }
}

fn pairs(text: &str) -> Result<Vec<(&str, &str)>> {
    text.split_whitespace()
        .map(|t| t.split_once('=').ok_or_else(|| Error::Parse(format!("bad token `{t}`"))))
        .collect()
}

fn lookup<'a>(kv: &[(&'a str, &'a str)], key: &str) -> Result<&'a str> {
    kv.iter()
        .find(|(k, _)| *k == key)
        .map(|(_, v)| *v)
        .ok_or_else(|| Error::Parse(format!("missing `{key}`")))
}

pub fn write_field(field: &ExtField) -> String {
    field.params().descriptor() + "\n"
}

pub fn read_field(lines: &mut Lines) -> Result<ExtField> {
    ExtField::from_params(FieldParams::parse_descriptor(lines.next_line("FIELD")?)?)
}

pub fn write_matrix<F: FieldOps>(m: &Matrix<F>) -> String {
    let mut out = format!("MATRIX rows={} cols={} field={}\n", m.rows(), m.cols(), F::KIND);
    if m.cols() > 0 {
        for r in 0..m.rows() {
            let row: Vec<String> = m.row(r).iter().map(|&x| m.field().format_elem(x)).collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
    }
    out
}

pub fn read_matrix<F: FieldOps>(field: &F, lines: &mut Lines) -> Result<Matrix<F>> {
    let kv = key_values(lines.next_line("MATRIX")?, "MATRIX")?;
    let rows: usize = parse_int(lookup(&kv, "rows")?)?;
    let cols: usize = parse_int(lookup(&kv, "cols")?)?;
    let kind = lookup(&kv, "field")?;
    if kind != F::KIND {
        return Err(Error::Parse(format!("expected a {} matrix, got field={kind}", F::KIND)));
    }
    let mut m = Matrix::zeros(field, rows, cols);
    if cols == 0 {
        return Ok(m);
    }
    for r in 0..rows {
        let line = lines.next_line("matrix row")?;
        let entries: Vec<&str> = line.split_whitespace().collect();
        if entries.len() != cols {
            return Err(Error::Parse(format!("row {r} has {} entries, expected {cols}", entries.len())));
        }
        for (c, e) in entries.into_iter().enumerate() {
            m.set(r, c, field.parse_elem(e)?);
        }
    }
    Ok(m)
}

/// A vector as a one-row MATRIX block.
pub fn write_vector(field: &ExtField, v: &[FieldElement]) -> String {
    write_matrix(&Matrix::row_vector(field, v))
}

pub fn read_vector(field: &ExtField, text: &str) -> Result<Vec<FieldElement>> {
    let mut lines = Lines::new(text);
    let m = read_matrix(field, &mut lines)?;
    lines.finish()?;
    if m.rows() != 1 {
        return Err(Error::Parse(format!("expected a single row, got {}", m.rows())));
    }
    Ok(m.row(0).to_vec())
}

fn join_elems(field: &ExtField, v: &[FieldElement]) -> String {
    v.iter().map(|&x| field.format_elem(x)).collect::<Vec<_>>().join(",")
}

fn join_ints(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn parse_elems(field: &ExtField, s: &str) -> Result<Vec<FieldElement>> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|e| field.parse_elem(e)).collect()
}

pub fn write_code(code: &HiddenCode) -> String {
    let f = code.field();
    let (kind, t, h, eta) = match code {
        HiddenCode::Gabidulin(_) => ("gab", String::new(), String::new(), String::new()),
        HiddenCode::Twisted(c) => ("twisted", join_ints(c.t()), join_ints(c.h()), join_elems(f, c.eta())),
    };
    format!(
        "CODE kind={kind} n={} k={} ell={} alpha={} t={t} h={h} eta={eta}\n",
        code.n(),
        code.k(),
        code.ell(),
        join_elems(f, code.alpha())
    )
}

pub fn read_code(field: &ExtField, lines: &mut Lines) -> Result<HiddenCode> {
    let kv = key_values(lines.next_line("CODE")?, "CODE")?;
    let n: usize = parse_int(lookup(&kv, "n")?)?;
    let k: usize = parse_int(lookup(&kv, "k")?)?;
    let ell: usize = parse_int(lookup(&kv, "ell")?)?;
    let alpha = parse_elems(field, lookup(&kv, "alpha")?)?;
    if alpha.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: alpha.len() });
    }
    let code = match lookup(&kv, "kind")? {
        "gab" => HiddenCode::Gabidulin(GabidulinCode::new(field, alpha, k)?),
        "twisted" => {
            let t = parse_list(lookup(&kv, "t")?)?;
            let h = parse_list(lookup(&kv, "h")?)?;
            let eta = parse_elems(field, lookup(&kv, "eta")?)?;
            HiddenCode::Twisted(TwistedGabidulinCode::new(field, alpha, k, t, h, eta)?)
        }
        other => return Err(Error::Parse(format!("unknown code kind `{other}`"))),
    };
    if code.ell() != ell {
        return Err(Error::Parse(format!("ell={ell} disagrees with {} twists", code.ell())));
    }
    Ok(code)
}

/// FIELD line plus CODE line.
pub fn write_code_file(code: &HiddenCode) -> String {
    write_field(code.field()) + &write_code(code)
}

pub fn read_code_file(text: &str) -> Result<HiddenCode> {
    let mut lines = Lines::new(text);
    let field = read_field(&mut lines)?;
    let code = read_code(&field, &mut lines)?;
    lines.finish()?;
    Ok(code)
}

pub fn write_public_key(pk: &GptPublicKey) -> String {
    format!(
        "GPTPUB\n{}n={} lambda={} k={} t={}\n{}",
        write_field(pk.field()),
        pk.n,
        pk.lambda,
        pk.k,
        pk.t,
        write_matrix(&pk.g_pub)
    )
}

fn read_public_key_body(lines: &mut Lines) -> Result<GptPublicKey> {
    let field = read_field(lines)?;
    let line = lines.next_line("key integers")?;
    let kv = pairs(line)?;
    let get = |key: &str| -> Result<usize> { parse_int(lookup(&kv, key)?) };
    let (n, lambda, k, t) = (get("n")?, get("lambda")?, get("k")?, get("t")?);
    let g_pub = read_matrix(&field, lines)?;
    if g_pub.rows() != k || g_pub.cols() != n + lambda {
        return Err(Error::Parse(format!(
            "public matrix is {}x{}, expected {k}x{}",
            g_pub.rows(),
            g_pub.cols(),
            n + lambda
        )));
    }
    if k >= n || t != (n - k) / 2 {
        return Err(Error::Parse(format!("inconsistent key integers n={n} k={k} t={t}")));
    }
    if g_pub.rank() != k {
        return Err(Error::InvalidCode("public matrix is rank deficient".into()));
    }
    Ok(GptPublicKey { g_pub, n, lambda, k, t })
}

pub fn read_public_key(text: &str) -> Result<GptPublicKey> {
    let mut lines = Lines::new(text);
    lines.expect("GPTPUB")?;
    let pk = read_public_key_body(&mut lines)?;
    lines.finish()?;
    Ok(pk)
}

pub fn write_secret_key(sk: &GptSecretKey) -> String {
    format!(
        "GPTSEC\n{}s={}\n{}{}{}{}",
        write_field(sk.field()),
        sk.distortion_rank,
        write_matrix(&sk.s),
        write_matrix(&sk.x),
        write_matrix(&sk.p),
        write_code(&sk.code)
    )
}

pub fn read_secret_key(text: &str) -> Result<GptSecretKey> {
    let mut lines = Lines::new(text);
    lines.expect("GPTSEC")?;
    let field = read_field(&mut lines)?;
    let line = lines.next_line("distortion rank")?;
    let s = line
        .strip_prefix("s=")
        .ok_or_else(|| Error::Parse(format!("expected `s=<int>`, got `{line}`")))?;
    let distortion_rank = parse_int(s)?;
    let s_mat = read_matrix(&field, &mut lines)?;
    let x = read_matrix(&field, &mut lines)?;
    let p = read_matrix(&field.base(), &mut lines)?;
    let code = read_code(&field, &mut lines)?;
    lines.finish()?;
    let sk = GptSecretKey { s: s_mat, x, p, code, distortion_rank };
    sk.validate()?;
    Ok(sk)
}

/// Generator matrix from a GPTPUB file, a FIELD+CODE file or a FIELD+MATRIX
/// file.
pub fn read_generator(text: &str) -> Result<Matrix<ExtField>> {
    let mut lines = Lines::new(text);
    if lines.peek() == Some("GPTPUB") {
        lines.next_line("GPTPUB")?;
        let pk = read_public_key_body(&mut lines)?;
        lines.finish()?;
        return Ok(pk.g_pub);
    }
    let field = read_field(&mut lines)?;
    let g = match lines.peek() {
        Some(l) if l.starts_with("CODE") => read_code(&field, &mut lines)?.generator(),
        _ => read_matrix(&field, &mut lines)?,
    };
    lines.finish()?;
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::sample_resistant_code;
    use crate::gpt::keygen;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn matrix_round_trip_both_kinds() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let f = ExtField::new(3, 4).unwrap();
        let m = Matrix::random(&f, 3, 5, &mut rng);
        let text = write_matrix(&m);
        assert!(text.starts_with("MATRIX rows=3 cols=5 field=ext\n"));
        assert_eq!(read_matrix(&f, &mut Lines::new(&text)).unwrap(), m);
        let b = Matrix::random(&f.base(), 2, 2, &mut rng);
        assert_eq!(read_matrix(&f.base(), &mut Lines::new(&write_matrix(&b))).unwrap(), b);
        assert!(read_matrix(&f.base(), &mut Lines::new(&text)).is_err());
    }

    #[test]
    fn keys_round_trip() {
        let mut rng = ChaCha20Rng::seed_from_u64(2);
        let f = ExtField::new(2, 16).unwrap().with_chain(vec![8, 16]).unwrap();
        let code = sample_resistant_code(&f, 8, 3, 1, &mut rng).unwrap();
        for lambda in [0, 2] {
            let (pk, sk) = keygen(HiddenCode::Twisted(code.clone()), lambda, lambda.min(1), &mut rng).unwrap();
            let pk_text = write_public_key(&pk);
            assert_eq!(read_public_key(&pk_text).unwrap(), pk);
            let sk_text = write_secret_key(&sk);
            let back = read_secret_key(&sk_text).unwrap();
            assert_eq!(write_secret_key(&back), sk_text);
            assert_eq!(back.public_key().unwrap(), pk);
            assert_eq!(read_generator(&pk_text).unwrap(), pk.g_pub);
        }
        let code = HiddenCode::Twisted(code);
        assert_eq!(read_code_file(&write_code_file(&code)).unwrap().generator(), code.generator());
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(read_public_key("GPTPUB\n").is_err());
        assert!(read_vector(&ExtField::new(2, 4).unwrap(), "MATRIX rows=1 cols=2 field=ext\n0000\n").is_err());
        assert!(read_code_file("FIELD q=2 m=4 mod=1,1,0,0,1\nCODE kind=rs n=1 k=1 ell=0 alpha=1000 t= h= eta=\n")
            .is_err());
    }
}
