use std::path::{Path, PathBuf};

use zgv_core::mfrd::QuadraticPencil;
use zgv_core::waveguide::PlateMaterial;

use crate::error::{CliError, CliResult};
use crate::mtx::read_matrix_market;

/// Reads `L0, L1, L2, M` from four MatrixMarket files.
pub fn load_pencil(paths: [&Path; 4]) -> CliResult<QuadraticPencil<f64>> {
    let mats = paths.iter().map(|p| read_matrix_market(p)).collect::<CliResult<Vec<_>>>()?;
    for (p, a) in paths.iter().zip(&mats) {
        if !a.is_square() {
            return Err(CliError::DimensionMismatch(format!("{} is {}x{}, not square", p.display(), a.rows(), a.cols())));
        }
    }
    for (p, a) in paths.iter().zip(&mats).skip(1) {
        if a.rows() != mats[0].rows() {
            return Err(CliError::DimensionMismatch(format!(
                "{} is {}x{} but {} is {}x{}",
                paths[0].display(),
                mats[0].rows(),
                mats[0].cols(),
                p.display(),
                a.rows(),
                a.cols()
            )));
        }
    }
    let mut it = mats.into_iter();
    let (l0, l1, l2, m) = (it.next().unwrap(), it.next().unwrap(), it.next().unwrap(), it.next().unwrap());
    Ok(QuadraticPencil::new(l0, l1, l2, m)?)
}

const VOIGT_KEYS: usize = 6;

/// Parses a material file of `key = value` lines (TOML syntax): `rho`, `h`
/// and either `ct`, `cl` or the upper triangle `C11` … `C66`.
pub fn parse_material(text: &str, name: &str) -> CliResult<PlateMaterial<f64>> {
    let table: toml::Table = text.parse().map_err(|e: toml::de::Error| {
        let line = e.span().map_or(1, |s| text[..s.start.min(text.len())].lines().count().max(1));
        CliError::Parse {
            file: name.to_string(),
            line,
            message: e.message().to_string(),
        }
    })?;
    let line_of = |key: &str| {
        text.lines()
            .position(|l| l.trim_start().starts_with(key))
            .map_or(1, |i| i + 1)
    };
    let mut rho = None;
    let mut h = None;
    let mut ct = None;
    let mut cl = None;
    let mut c = [[0.0f64; 6]; 6];
    let mut any_c = false;
    for (key, value) in &table {
        let v = match value {
            toml::Value::Float(f) => *f,
            toml::Value::Integer(i) => *i as f64,
            _ => {
                return Err(CliError::Parse {
                    file: name.to_string(),
                    line: line_of(key),
                    message: format!("value of '{key}' is not a number"),
                })
            }
        };
        match key.as_str() {
            "rho" => rho = Some(v),
            "h" => h = Some(v),
            "ct" => ct = Some(v),
            "cl" => cl = Some(v),
            k if voigt_key(k).is_some() => {
                let (i, j) = voigt_key(k).unwrap();
                c[i][j] = v;
                c[j][i] = v;
                any_c = true;
            }
            other => {
                return Err(CliError::Parse {
                    file: name.to_string(),
                    line: line_of(other),
                    message: format!("unknown key '{other}'"),
                })
            }
        }
    }
    let missing = |what: &str| CliError::Usage(format!("{name}: missing key '{what}'"));
    let rho = rho.ok_or_else(|| missing("rho"))?;
    let h = h.ok_or_else(|| missing("h"))?;
    match (ct, cl, any_c) {
        (Some(ct), Some(cl), false) => Ok(PlateMaterial::isotropic(ct, cl, rho, h)?),
        (None, None, true) => Ok(PlateMaterial::new(rho, c, h)?),
        _ => Err(CliError::Usage(format!("{name}: give either both ct and cl or the C11..C66 entries"))),
    }
}

/// `C<i><j>` with `1 ≤ i ≤ j ≤ 6`, case-insensitive.
fn voigt_key(k: &str) -> Option<(usize, usize)> {
    let b = k.as_bytes();
    if b.len() != 3 || !(b[0] == b'C' || b[0] == b'c') {
        return None;
    }
    let d = |x: u8| (x as char).to_digit(10).map(|v| v as usize);
    let (i, j) = (d(b[1])?, d(b[2])?);
    (1..=VOIGT_KEYS).contains(&i).then_some(())?;
    (i..=VOIGT_KEYS).contains(&j).then_some((i - 1, j - 1))
}

pub fn read_material(path: &Path) -> CliResult<PlateMaterial<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_material(&text, &path.display().to_string())
}

/// Where the pencil of a run comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum PencilSource {
    Files([PathBuf; 4]),
    Example21,
    Plate {
        material: PathBuf,
        order: usize,
        elements: usize,
        polarization: zgv_core::waveguide::Polarization,
        bc: zgv_core::waveguide::BoundaryCondition,
    },
}
