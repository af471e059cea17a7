use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use wedgelab::simplicial::SimplicialComplex;

/// Ambient space named on the command line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpaceSpec {
    /// `simplex:n`, the full simplex Δⁿ.
    Simplex(u32),
    /// `complete:m`, the complete graph K_m.
    Complete(u32),
    /// `skeleton:n:d`, the d-skeleton of Δⁿ.
    Skeleton(u32, u32),
    /// `file:path`, a facet list.
    File(PathBuf),
}

impl FromStr for SpaceSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let num = |t: &str| {
            t.parse::<u32>()
                .map_err(|_| format!("expected a nonnegative integer, got {t:?} in {s:?}"))
        };
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| format!("space {s:?} is not of the form kind:args"))?;
        match kind {
            "simplex" => Ok(SpaceSpec::Simplex(num(rest)?)),
            "complete" => Ok(SpaceSpec::Complete(num(rest)?)),
            "skeleton" => {
                let (n, d) = rest
                    .split_once(':')
                    .ok_or_else(|| format!("skeleton needs skeleton:n:d, got {s:?}"))?;
                Ok(SpaceSpec::Skeleton(num(n)?, num(d)?))
            }
            "file" => {
                let path = PathBuf::from(rest);
                if !path.is_file() {
                    return Err(format!("no such file: {rest}"));
                }
                Ok(SpaceSpec::File(path))
            }
            other => Err(format!(
                "unknown space kind {other:?} (expected simplex, complete, skeleton or file)"
            )),
        }
    }
}

impl fmt::Display for SpaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceSpec::Simplex(n) => write!(f, "simplex:{n}"),
            SpaceSpec::Complete(m) => write!(f, "complete:{m}"),
            SpaceSpec::Skeleton(n, d) => write!(f, "skeleton:{n}:{d}"),
            SpaceSpec::File(p) => write!(f, "file:{}", p.display()),
        }
    }
}

impl SpaceSpec {
    pub fn build(&self) -> wedgelab::Result<SimplicialComplex> {
        Ok(match self {
            SpaceSpec::Simplex(n) => SimplicialComplex::full_simplex(*n),
            SpaceSpec::Complete(m) => SimplicialComplex::complete_graph(*m),
            SpaceSpec::Skeleton(n, d) => SimplicialComplex::full_simplex(*n).skeleton(*d as usize),
            SpaceSpec::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    wedgelab::Error::InvalidArgument(format!("{}: {e}", path.display()))
                })?;
                SimplicialComplex::parse_facets(&text)?
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        assert_eq!("simplex:3".parse(), Ok(SpaceSpec::Simplex(3)));
        assert_eq!("complete:5".parse(), Ok(SpaceSpec::Complete(5)));
        assert_eq!("skeleton:4:1".parse(), Ok(SpaceSpec::Skeleton(4, 1)));
        assert!("simplex:-1".parse::<SpaceSpec>().is_err());
        assert!("simplex".parse::<SpaceSpec>().is_err());
        assert!("torus:2".parse::<SpaceSpec>().is_err());
        assert!("skeleton:4".parse::<SpaceSpec>().is_err());
        assert!("file:/definitely/not/here".parse::<SpaceSpec>().is_err());
        assert_eq!(SpaceSpec::Skeleton(4, 1).to_string(), "skeleton:4:1");
    }

    #[test]
    fn builds_spaces() {
        let k5 = SpaceSpec::Complete(5).build().unwrap();
        assert_eq!(k5.f_vector(), vec![5, 10]);
        assert_eq!(SpaceSpec::Skeleton(4, 1).build().unwrap(), k5);
    }
}
