//! Newform JSON files and their conversion into validated core values.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use adelic_core::characters::{unit_group, DirichletCharacter, RootOfUnity};
use adelic_core::newforms::{FieldCharacter, InnerTwist, Newform};
use adelic_core::numberfields::{FieldAutomorphism, NfElem, NumberFieldQ, Rat};
use serde::{Deserialize, Serialize};

use crate::error::AppError;
use crate::numerics;

/// A character modulo `modulus` of order `order`: `exps` lists `[u, e]` with
/// `χ(u) = ζ^e` for every unit `u`, and `zeta` gives `ζ` inside the coefficient
/// field (defaults to `−1` when `order ≤ 2`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CharacterJson {
    pub modulus: u64,
    pub order: u64,
    pub exps: Vec<(u64, u64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ApJson {
    pub l: u64,
    pub coords: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistJson {
    pub auto_image: Vec<String>,
    pub char: CharacterJson,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NewformJson {
    pub label: String,
    pub level: u64,
    pub weight: u32,
    pub char: CharacterJson,
    /// Constant term first, monic.
    pub field_poly: Vec<i64>,
    pub power_basis: bool,
    pub ap: Vec<ApJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner_twists: Option<Vec<TwistJson>>,
    /// Images of the root under candidate automorphisms of the coefficient field.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub automorphisms: Option<Vec<Vec<String>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cm_disc: Option<i64>,
}

/// A validated form with the automorphism candidates and any listed inner twists.
#[derive(Clone, Debug)]
pub struct LoadedForm {
    pub form: Newform,
    pub automorphisms: Vec<FieldAutomorphism>,
    pub listed_twists: Option<Vec<InnerTwist>>,
    /// Primes failing the advisory coefficient-size check.
    pub ramanujan_flags: Vec<u64>,
}

fn schema(msg: impl Into<String>) -> AppError {
    AppError::Schema(msg.into())
}

pub fn parse_rat(s: &str) -> Result<Rat, AppError> {
    s.trim().parse::<Rat>().map_err(|_| schema(format!("not a rational number: {s:?}")))
}

fn element(field: &NumberFieldQ, coords: &[String]) -> Result<NfElem, AppError> {
    let v = coords.iter().map(|c| parse_rat(c)).collect::<Result<Vec<_>, _>>()?;
    field.element(v).map_err(|e| schema(e.to_string()))
}

/// Build the character and its values in `field`, checking the table is a homomorphism.
pub fn character(field: &NumberFieldQ, c: &CharacterJson) -> Result<FieldCharacter, AppError> {
    if c.modulus == 0 || c.order == 0 {
        return Err(schema("character modulus and order must be positive"));
    }
    let table: HashMap<u64, u64> = c.exps.iter().map(|&(u, e)| (u % c.modulus, e % c.order)).collect();
    let group = unit_group(c.modulus);
    let mut images = Vec::new();
    for &g in group.generators() {
        let e = *table.get(&g).ok_or_else(|| schema(format!("character table misses generator {g}")))?;
        images.push(RootOfUnity::new(c.order, e as i64));
    }
    let chi = DirichletCharacter::from_images(c.modulus, images).map_err(|e| schema(e.to_string()))?;
    for (&u, &e) in &table {
        if group.is_unit(u) && chi.eval(u).map_err(|e| schema(e.to_string()))? != RootOfUnity::new(c.order, e as i64) {
            return Err(schema(format!("character table is not multiplicative at {u}")));
        }
    }
    if chi.order() != c.order && !(c.order <= 2 && chi.order() == 1) {
        return Err(schema(format!("character has order {} not {}", chi.order(), c.order)));
    }
    let zeta = match &c.zeta {
        Some(z) => element(field, z)?,
        None if c.order <= 2 => field.from_int(-1),
        None => return Err(schema("characters of order > 2 need an explicit zeta")),
    };
    let values = group.generators().iter().map(|g| field.pow(&zeta, table[g])).collect();
    Ok(FieldCharacter { chi, values })
}

/// The nontrivial automorphism of a quadratic field `x² + bx + c`: `x ↦ −b − x`.
fn quadratic_conjugate(field: &NumberFieldQ) -> Option<FieldAutomorphism> {
    if field.degree() != 2 {
        return None;
    }
    let b = Rat::from_integer(field.poly()[1].clone());
    let image = field.element(vec![-b, Rat::from_integer((-1).into())]).ok()?;
    FieldAutomorphism::new(field, image).ok()
}

impl NewformJson {
    pub fn parse(s: &str) -> Result<Self, AppError> {
        serde_json::from_str(s).map_err(|e| schema(e.to_string()))
    }

    pub fn into_form(self) -> Result<LoadedForm, AppError> {
        if !self.power_basis {
            return Err(AppError::NotPowerBasis);
        }
        let field = NumberFieldQ::from_i64(&self.field_poly).map_err(|e| schema(e.to_string()))?;
        let chi = character(&field, &self.char)?;
        let mut ap = BTreeMap::new();
        for e in &self.ap {
            if ap.insert(e.l, element(&field, &e.coords)?).is_some() {
                return Err(schema(format!("duplicate coefficient for l = {}", e.l)));
            }
        }
        let ramanujan_flags = numerics::ramanujan_violations(&field, self.level, self.weight, ap.iter());
        let mut automorphisms = vec![FieldAutomorphism::identity(&field)];
        let mut push = |a: FieldAutomorphism| {
            if !automorphisms.contains(&a) {
                automorphisms.push(a);
            }
        };
        if let Some(list) = &self.automorphisms {
            for img in list {
                push(FieldAutomorphism::new(&field, element(&field, img)?).map_err(|e| schema(e.to_string()))?);
            }
        }
        let listed_twists = match &self.inner_twists {
            None => None,
            Some(list) => {
                let mut out = Vec::new();
                for t in list {
                    let gamma = FieldAutomorphism::new(&field, element(&field, &t.auto_image)?)
                        .map_err(|e| schema(e.to_string()))?;
                    push(gamma.clone());
                    out.push(InnerTwist { gamma, chi: character(&field, &t.char)? });
                }
                Some(out)
            }
        };
        if let Some(c) = quadratic_conjugate(&field) {
            push(c);
        }
        let form = Newform::new(self.label, self.level, self.weight, chi, field, ap, self.cm_disc)
            .map_err(|e| schema(e.to_string()))?;
        Ok(LoadedForm { form, automorphisms, listed_twists, ramanujan_flags })
    }
}

pub fn parse_newform(s: &str) -> Result<LoadedForm, AppError> {
    NewformJson::parse(s)?.into_form()
}

pub fn load_newform_file(path: &Path) -> Result<LoadedForm, AppError> {
    let s = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    parse_newform(&s)
}
