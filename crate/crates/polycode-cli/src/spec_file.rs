//! Line-oriented `key=value` code specifications.

use anyhow::{anyhow, bail, Context, Result};
use polycode::subfield::SubfieldRsSpec;
use polycode::{Fe, Field, MultSpec, RmSpec, RsSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Rs,
    Mult,
    Subfield,
    Rm,
}

impl Family {
    fn name(self) -> &'static str {
        match self {
            Family::Rs => "rs",
            Family::Mult => "mult",
            Family::Subfield => "rs-subfield",
            Family::Rm => "rm",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    pub family: Family,
    pub p: u64,
    pub d: usize,
    pub field_seed: u64,
    pub n: Option<usize>,
    pub points: Option<Vec<String>>,
    pub k: usize,
    pub s: Option<usize>,
    pub m: Option<usize>,
    pub r: Option<usize>,
}

pub enum CodeSpec {
    Rs(RsSpec),
    Mult(MultSpec),
    Subfield(SubfieldRsSpec),
    Rm(RmSpec),
}

impl SpecFile {
    pub fn parse(text: &str) -> Result<SpecFile> {
        let mut family = None;
        let mut p = None;
        let mut k = None;
        let mut spec = SpecFile { family: Family::Rs, p: 0, d: 1, field_seed: 0, n: None, points: None, k: 0, s: None, m: None, r: None };
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| anyhow!("line {}: expected key=value", lineno + 1))?;
            let (key, value) = (key.trim(), value.trim());
            let num = || value.parse::<usize>().with_context(|| format!("line {}: bad number {value:?}", lineno + 1));
            match key {
                "family" => {
                    family = Some(match value {
                        "rs" => Family::Rs,
                        "mult" => Family::Mult,
                        "rs-subfield" => Family::Subfield,
                        "rm" => Family::Rm,
                        other => bail!("unknown family {other:?}"),
                    })
                }
                "p" => p = Some(num()? as u64),
                "d" => spec.d = num()?,
                "field_seed" => spec.field_seed = num()? as u64,
                "n" => spec.n = Some(num()?),
                "points" => spec.points = Some(value.split_whitespace().map(str::to_string).collect()),
                "k" => k = Some(num()?),
                "s" => spec.s = Some(num()?),
                "m" => spec.m = Some(num()?),
                "r" => spec.r = Some(num()?),
                other => bail!("line {}: unknown key {other:?}", lineno + 1),
            }
        }
        spec.family = family.ok_or_else(|| anyhow!("missing family"))?;
        spec.p = p.ok_or_else(|| anyhow!("missing p"))?;
        spec.k = k.ok_or_else(|| anyhow!("missing k"))?;
        Ok(spec)
    }

    #[cfg(test)]
    pub fn format(&self) -> String {
        let mut out = format!("family={}\np={}\nd={}\nfield_seed={}\n", self.family.name(), self.p, self.d, self.field_seed);
        if let Some(n) = self.n {
            out += &format!("n={n}\n");
        }
        if let Some(pts) = &self.points {
            out += &format!("points={}\n", pts.join(" "));
        }
        out += &format!("k={}\n", self.k);
        for (key, v) in [("s", self.s), ("m", self.m), ("r", self.r)] {
            if let Some(v) = v {
                out += &format!("{key}={v}\n");
            }
        }
        out
    }

    pub fn field(&self) -> Result<Field> {
        Ok(Field::new(self.p as u32, self.d, None, self.field_seed)?)
    }

    fn points(&self, field: &Field) -> Result<Vec<Fe>> {
        match (&self.points, self.n) {
            (Some(pts), _) => pts.iter().map(|t| Ok(field.parse(t)?)).collect(),
            (None, n) => {
                let n = n.unwrap_or(field.size() as usize);
                if n > field.size() as usize {
                    bail!("n={n} exceeds field size {}", field.size());
                }
                Ok(field.elements().take(n).collect())
            }
        }
    }

    pub fn build(&self) -> Result<CodeSpec> {
        let field = self.field()?;
        let need = |v: Option<usize>, key: &str| v.ok_or_else(|| anyhow!("family {} needs {key}", self.family.name()));
        Ok(match self.family {
            Family::Rs => CodeSpec::Rs(RsSpec::new(&field, self.points(&field)?, self.k)?),
            Family::Mult => CodeSpec::Mult(MultSpec::new(&field, self.points(&field)?, self.k, need(self.s, "s")?)?),
            Family::Subfield => {
                let s = need(self.s, "s")?;
                let r = self.r.unwrap_or(s.min(2));
                CodeSpec::Subfield(SubfieldRsSpec::new(&field, s, self.points(&field)?, self.k, r, self.field_seed)?)
            }
            Family::Rm => CodeSpec::Rm(RmSpec::new(&field, need(self.m, "m")?, self.k)?),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "family=mult\np=7\nd=1\nfield_seed=0\nn=7\nk=3\ns=2\n";
        let spec = SpecFile::parse(text).unwrap();
        assert_eq!(spec.format(), text);
        let sub = SpecFile::parse("family=rs-subfield\np=5\npoints=0 1 2\nk=2\ns=2\nr=2\n").unwrap();
        assert_eq!(SpecFile::parse(&sub.format()).unwrap(), sub);
        assert!(SpecFile::parse("family=rs\np=7\n").is_err());
        assert!(SpecFile::parse("family=rs\np=7\nk=2\nbogus=1\n").is_err());
    }

    #[test]
    fn builds_each_family() {
        for text in [
            "family=rs\np=17\nn=16\nk=4\n",
            "family=mult\np=11\nk=4\ns=3\n",
            "family=rs-subfield\np=5\nk=2\ns=2\n",
            "family=rm\np=7\nk=3\nm=2\n",
        ] {
            SpecFile::parse(text).unwrap().build().unwrap();
        }
    }
}
