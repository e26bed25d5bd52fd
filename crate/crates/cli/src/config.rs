//! Scenario files. A scenario is a TOML document with optional `[params]`,
//! `[inversion]`, `[sim]` and `[sweep]` tables and any number of
//! `[[variant]]` entries. Missing parameters take their reference values.
//!
//! ```toml
//! [params]
//! lambda_p = "50 per_km2"
//! p_p = "40 dBm"
//! gamma_tr = "30 dB"
//! tx_pattern = { elements = 16 }
//!
//! [sweep]
//! parameter = "gamma_pt"
//! values = ["-30 dBm", "-20 dBm", "-10 dBm"]
//!
//! [[variant]]
//! label = "sparse PBs"
//! set = { lambda_p = "10 per_km2" }
//! ```

use std::fmt;
use std::str::FromStr;

use pbcov_core::netmodel::array_to_pattern;
use pbcov_core::{AntennaPattern, InversionParams, NetworkParams, SimConfig, SimMode};
use serde::Serialize;
use toml::{Table, Value};

use crate::error::CliError;
use crate::quantity::{self, UnitClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Antenna {
    Pb,
    Tx,
    Rx,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternPart {
    GMax,
    GMin,
    Theta,
    /// Sets the whole pattern from an array size.
    Elements,
}

/// A settable scenario parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ParamField {
    LambdaP,
    LambdaT,
    D0,
    RMin,
    RMax,
    AlphaL,
    AlphaN,
    M,
    PP,
    Sigma2,
    Rho,
    Eta,
    GammaPt,
    PMax1,
    PMax2,
    GammaTr,
    NLevels,
    Pattern(Antenna, PatternPart),
}

const SCALARS: [(&str, ParamField); 17] = [
    ("lambda_p", ParamField::LambdaP),
    ("lambda_t", ParamField::LambdaT),
    ("d0", ParamField::D0),
    ("r_min", ParamField::RMin),
    ("r_max", ParamField::RMax),
    ("alpha_l", ParamField::AlphaL),
    ("alpha_n", ParamField::AlphaN),
    ("m", ParamField::M),
    ("p_p", ParamField::PP),
    ("sigma2", ParamField::Sigma2),
    ("rho", ParamField::Rho),
    ("eta", ParamField::Eta),
    ("gamma_pt", ParamField::GammaPt),
    ("p_max1", ParamField::PMax1),
    ("p_max2", ParamField::PMax2),
    ("gamma_tr", ParamField::GammaTr),
    ("n_levels", ParamField::NLevels),
];

const ANTENNAS: [(&str, Antenna); 3] = [
    ("pb_pattern", Antenna::Pb),
    ("tx_pattern", Antenna::Tx),
    ("rx_pattern", Antenna::Rx),
];

const PARTS: [(&str, PatternPart); 4] = [
    ("g_max", PatternPart::GMax),
    ("g_min", PatternPart::GMin),
    ("theta", PatternPart::Theta),
    ("elements", PatternPart::Elements),
];

fn lookup<T: Copy + PartialEq>(table: &[(&'static str, T)], key: T) -> &'static str {
    table
        .iter()
        .find(|(_, v)| *v == key)
        .map(|(k, _)| *k)
        .expect("every variant is listed")
}

impl ParamField {
    pub fn name(&self) -> String {
        match self {
            ParamField::Pattern(a, p) => {
                format!("{}.{}", lookup(&ANTENNAS, *a), lookup(&PARTS, *p))
            }
            other => lookup(&SCALARS, *other).to_string(),
        }
    }

    pub fn class(&self) -> UnitClass {
        use ParamField::*;
        match self {
            LambdaP | LambdaT => UnitClass::Density,
            D0 | RMin | RMax => UnitClass::Length,
            AlphaL | AlphaN | Rho | Eta => UnitClass::Plain,
            M | NLevels | Pattern(_, PatternPart::Elements) => UnitClass::Count,
            PP | Sigma2 | GammaPt | PMax1 | PMax2 => UnitClass::Power,
            GammaTr | Pattern(_, PatternPart::GMax | PatternPart::GMin) => UnitClass::Ratio,
            Pattern(_, PatternPart::Theta) => UnitClass::Angle,
        }
    }

    /// Write an SI value into `params`.
    pub fn apply(&self, params: &mut NetworkParams, v: f64) -> Result<(), CliError> {
        use ParamField::*;
        match self {
            LambdaP => params.lambda_p = v,
            LambdaT => params.lambda_t = v,
            D0 => params.d0 = v,
            RMin => params.r_min = v,
            RMax => params.r_max = v,
            AlphaL => params.alpha_l = v,
            AlphaN => params.alpha_n = v,
            M => params.m = count(self, v)?,
            PP => params.p_p = v,
            Sigma2 => params.sigma2 = v,
            Rho => params.rho = v,
            Eta => params.eta = v,
            GammaPt => params.gamma_pt = v,
            PMax1 => params.p_max1 = v,
            PMax2 => params.p_max2 = v,
            GammaTr => params.gamma_tr = v,
            NLevels => params.n_levels = count(self, v)?,
            Pattern(a, part) => {
                let pattern = match a {
                    Antenna::Pb => &mut params.pb_pattern,
                    Antenna::Tx => &mut params.tx_pattern,
                    Antenna::Rx => &mut params.rx_pattern,
                };
                match part {
                    PatternPart::GMax => pattern.g_max = v,
                    PatternPart::GMin => pattern.g_min = v,
                    PatternPart::Theta => pattern.theta = v,
                    PatternPart::Elements => *pattern = array_to_pattern(count(self, v)?)?,
                }
            }
        }
        Ok(())
    }
}

fn count(field: &ParamField, v: f64) -> Result<u32, CliError> {
    if v.fract() != 0.0 || !(1.0..=u32::MAX as f64).contains(&v) {
        return Err(CliError::Config(format!(
            "{}: expected a positive integer, got {v}",
            field.name()
        )));
    }
    Ok(v as u32)
}

impl fmt::Display for ParamField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for ParamField {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        if let Some(&(_, f)) = SCALARS.iter().find(|(k, _)| *k == s) {
            return Ok(f);
        }
        if let Some((a, p)) = s.split_once('.') {
            let a = ANTENNAS.iter().find(|(k, _)| *k == a);
            let p = PARTS.iter().find(|(k, _)| *k == p);
            if let (Some(&(_, a)), Some(&(_, p))) = (a, p) {
                return Ok(ParamField::Pattern(a, p));
            }
        }
        Err(CliError::Config(format!("unknown parameter '{s}'")))
    }
}

impl Serialize for ParamField {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

/// A parameter sweep. Every listed field is set to each value in turn, so
/// all of them must share a unit class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub fields: Vec<ParamField>,
    /// SI values.
    pub values: Vec<f64>,
    /// Append the unbounded-PB-power limit to each series.
    pub asymptote: bool,
}

impl Sweep {
    pub fn class(&self) -> UnitClass {
        self.fields[0].class()
    }

    pub fn label(&self) -> String {
        self.fields
            .iter()
            .map(ParamField::name)
            .collect::<Vec<_>>()
            .join("=")
    }
}

/// A named set of overrides applied on top of the base parameters; each
/// variant becomes one series in the results.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Variant {
    pub label: String,
    pub set: Vec<(ParamField, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scenario {
    pub params: NetworkParams,
    pub inversion: InversionParams,
    pub sim: Option<SimConfig>,
    pub sweep: Option<Sweep>,
    pub variants: Vec<Variant>,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            params: NetworkParams::reference(),
            inversion: InversionParams::default(),
            sim: None,
            sweep: None,
            variants: Vec::new(),
        }
    }
}

/// One fully resolved parameter set to evaluate.
#[derive(Debug, Clone)]
pub struct Point {
    pub series: String,
    /// Sweep value in SI units.
    pub value: Option<f64>,
    pub params: NetworkParams,
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn check_keys(table: &Table, allowed: &[&str], context: &str) -> Result<(), CliError> {
    match table.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(config_err(format!(
            "unknown key '{k}' in {context}; expected one of {}",
            allowed.join(", ")
        ))),
        None => Ok(()),
    }
}

fn as_table<'a>(v: &'a Value, context: &str) -> Result<&'a Table, CliError> {
    v.as_table()
        .ok_or_else(|| config_err(format!("{context} must be a table")))
}

/// Parameter assignments in a `[params]` or variant `set` table, in a
/// fixed order.
fn parse_assignments(table: &Table, context: &str) -> Result<Vec<(ParamField, f64)>, CliError> {
    let mut allowed: Vec<&str> = SCALARS.iter().map(|(k, _)| *k).collect();
    allowed.extend(ANTENNAS.iter().map(|(k, _)| *k));
    check_keys(table, &allowed, context)?;
    let mut out = Vec::new();
    for (key, field) in SCALARS {
        if let Some(v) = table.get(key) {
            out.push((field, quantity::parse(key, v, field.class())?));
        }
    }
    for (key, antenna) in ANTENNAS {
        let Some(v) = table.get(key) else { continue };
        let sub = as_table(v, key)?;
        let parts: Vec<&str> = PARTS.iter().map(|(k, _)| *k).collect();
        check_keys(sub, &parts, key)?;
        if sub.contains_key("elements") && sub.len() > 1 {
            return Err(config_err(format!(
                "{key}: give either elements or g_max/g_min/theta, not both"
            )));
        }
        for (part_key, part) in PARTS {
            if let Some(pv) = sub.get(part_key) {
                let field = ParamField::Pattern(antenna, part);
                out.push((field, quantity::parse(&field.name(), pv, field.class())?));
            }
        }
    }
    Ok(out)
}

fn get_uint(table: &Table, key: &str, context: &str) -> Result<Option<u64>, CliError> {
    match table.get(key) {
        None => Ok(None),
        Some(Value::Integer(i)) if *i >= 0 => Ok(Some(*i as u64)),
        Some(Value::String(s)) => s.parse::<u64>().map(Some).map_err(|_| {
            config_err(format!(
                "{context}.{key}: expected a nonnegative integer, got '{s}'"
            ))
        }),
        Some(v) => Err(config_err(format!(
            "{context}.{key}: expected a nonnegative integer, got {v}"
        ))),
    }
}

fn parse_inversion(table: &Table) -> Result<InversionParams, CliError> {
    check_keys(table, &["a", "b", "c"], "[inversion]")?;
    let mut inv = InversionParams::default();
    if let Some(v) = table.get("a") {
        inv.a_ctrl = quantity::parse("inversion.a", v, UnitClass::Plain)?;
    }
    let small = |v: Option<u64>, d: u32, key: &str| -> Result<u32, CliError> {
        v.map(|x| u32::try_from(x).map_err(|_| config_err(format!("inversion.{key} is too large"))))
            .unwrap_or(Ok(d))
    };
    inv.b_ctrl = small(get_uint(table, "b", "inversion")?, inv.b_ctrl, "b")?;
    inv.c_ctrl = small(get_uint(table, "c", "inversion")?, inv.c_ctrl, "c")?;
    Ok(inv)
}

fn parse_sim(table: &Table) -> Result<SimConfig, CliError> {
    check_keys(
        table,
        &["trials", "mode", "seed", "window_padding"],
        "[sim]",
    )?;
    let mut sim = SimConfig::default();
    if let Some(t) = get_uint(table, "trials", "sim")? {
        sim.trials = t;
    }
    if let Some(s) = get_uint(table, "seed", "sim")? {
        sim.seed = s;
    }
    if let Some(m) = table.get("mode") {
        let text = m
            .as_str()
            .ok_or_else(|| config_err("sim.mode must be a string"))?;
        sim.mode = SimMode::from_str(text).map_err(config_err)?;
    }
    if let Some(p) = table.get("window_padding") {
        sim.window_padding = Some(quantity::parse("sim.window_padding", p, UnitClass::Length)?);
    }
    Ok(sim)
}

fn parse_sweep(table: &Table) -> Result<Sweep, CliError> {
    check_keys(table, &["parameter", "values", "asymptote"], "[sweep]")?;
    let fields: Vec<ParamField> = match table.get("parameter") {
        Some(Value::String(s)) => vec![s.parse()?],
        Some(Value::Array(items)) => items
            .iter()
            .map(|v| {
                v.as_str()
                    .ok_or_else(|| config_err("sweep.parameter entries must be strings"))?
                    .parse()
            })
            .collect::<Result<_, _>>()?,
        _ => {
            return Err(config_err(
                "sweep.parameter must be a name or a list of names",
            ))
        }
    };
    if fields.is_empty() {
        return Err(config_err("sweep.parameter is empty"));
    }
    let class = fields[0].class();
    if let Some(f) = fields.iter().find(|f| f.class() != class) {
        return Err(config_err(format!(
            "sweep mixes {} with {}, which take different units",
            fields[0], f
        )));
    }
    let values = table
        .get("values")
        .and_then(Value::as_array)
        .ok_or_else(|| config_err("sweep.values must be a list"))?
        .iter()
        .map(|v| quantity::parse("sweep.values", v, class))
        .collect::<Result<Vec<_>, _>>()?;
    if values.is_empty() {
        return Err(config_err("sweep.values is empty"));
    }
    let asymptote = match table.get("asymptote") {
        None => false,
        Some(Value::Boolean(b)) => *b,
        Some(_) => return Err(config_err("sweep.asymptote must be true or false")),
    };
    Ok(Sweep {
        fields,
        values,
        asymptote,
    })
}

fn parse_variant(v: &Value) -> Result<Variant, CliError> {
    let table = as_table(v, "[[variant]]")?;
    check_keys(table, &["label", "set"], "[[variant]]")?;
    let label = table
        .get("label")
        .and_then(Value::as_str)
        .ok_or_else(|| config_err("every [[variant]] needs a label"))?
        .to_string();
    let set = match table.get("set") {
        Some(s) => parse_assignments(as_table(s, "variant.set")?, &format!("variant '{label}'"))?,
        None => Vec::new(),
    };
    Ok(Variant { label, set })
}

impl Scenario {
    pub fn from_toml_str(text: &str) -> Result<Self, CliError> {
        let doc: Table = text
            .parse()
            .map_err(|e: toml::de::Error| config_err(e.to_string()))?;
        check_keys(
            &doc,
            &["params", "inversion", "sim", "sweep", "variant"],
            "the scenario",
        )?;
        let mut sc = Scenario::default();
        if let Some(p) = doc.get("params") {
            for (field, v) in parse_assignments(as_table(p, "[params]")?, "[params]")? {
                field.apply(&mut sc.params, v)?;
            }
        }
        if let Some(t) = doc.get("inversion") {
            sc.inversion = parse_inversion(as_table(t, "[inversion]")?)?;
        }
        if let Some(t) = doc.get("sim") {
            sc.sim = Some(parse_sim(as_table(t, "[sim]")?)?);
        }
        if let Some(t) = doc.get("sweep") {
            sc.sweep = Some(parse_sweep(as_table(t, "[sweep]")?)?);
        }
        if let Some(v) = doc.get("variant") {
            let items = v
                .as_array()
                .ok_or_else(|| config_err("variant must be an array of tables"))?;
            sc.variants = items.iter().map(parse_variant).collect::<Result<_, _>>()?;
        }
        sc.validate()?;
        Ok(sc)
    }

    /// The scenario as TOML with every value in SI units, written so that
    /// reading it back gives an identical scenario.
    pub fn to_toml_string(&self) -> String {
        let mut doc = Table::new();
        let mut params = Table::new();
        let p = &self.params;
        let scalars = [
            p.lambda_p,
            p.lambda_t,
            p.d0,
            p.r_min,
            p.r_max,
            p.alpha_l,
            p.alpha_n,
            p.m as f64,
            p.p_p,
            p.sigma2,
            p.rho,
            p.eta,
            p.gamma_pt,
            p.p_max1,
            p.p_max2,
            p.gamma_tr,
            p.n_levels as f64,
        ];
        for ((key, field), v) in SCALARS.iter().zip(scalars) {
            params.insert(key.to_string(), quantity::to_config(v, field.class()));
        }
        for (key, antenna) in ANTENNAS {
            let pat: &AntennaPattern = match antenna {
                Antenna::Pb => &p.pb_pattern,
                Antenna::Tx => &p.tx_pattern,
                Antenna::Rx => &p.rx_pattern,
            };
            let mut t = Table::new();
            t.insert(
                "g_max".into(),
                quantity::to_config(pat.g_max, UnitClass::Ratio),
            );
            t.insert(
                "g_min".into(),
                quantity::to_config(pat.g_min, UnitClass::Ratio),
            );
            t.insert(
                "theta".into(),
                quantity::to_config(pat.theta, UnitClass::Angle),
            );
            params.insert(key.into(), Value::Table(t));
        }
        doc.insert("params".into(), Value::Table(params));

        let mut inv = Table::new();
        inv.insert("a".into(), Value::Float(self.inversion.a_ctrl));
        inv.insert("b".into(), Value::Integer(self.inversion.b_ctrl.into()));
        inv.insert("c".into(), Value::Integer(self.inversion.c_ctrl.into()));
        doc.insert("inversion".into(), Value::Table(inv));

        if let Some(sim) = &self.sim {
            let uint = |v: u64| {
                i64::try_from(v)
                    .map(Value::Integer)
                    .unwrap_or_else(|_| Value::String(v.to_string()))
            };
            let mut t = Table::new();
            t.insert("trials".into(), uint(sim.trials));
            let mode = match sim.mode {
                SimMode::Faithful => "faithful",
                SimMode::AssumptionMatched => "matched",
            };
            t.insert("mode".into(), Value::String(mode.into()));
            t.insert("seed".into(), uint(sim.seed));
            if let Some(pad) = sim.window_padding {
                t.insert(
                    "window_padding".into(),
                    quantity::to_config(pad, UnitClass::Length),
                );
            }
            doc.insert("sim".into(), Value::Table(t));
        }

        if let Some(sw) = &self.sweep {
            let mut t = Table::new();
            let names: Vec<Value> = sw.fields.iter().map(|f| Value::String(f.name())).collect();
            t.insert("parameter".into(), Value::Array(names));
            let class = sw.class();
            t.insert(
                "values".into(),
                Value::Array(
                    sw.values
                        .iter()
                        .map(|&v| quantity::to_config(v, class))
                        .collect(),
                ),
            );
            t.insert("asymptote".into(), Value::Boolean(sw.asymptote));
            doc.insert("sweep".into(), Value::Table(t));
        }

        if !self.variants.is_empty() {
            let items = self
                .variants
                .iter()
                .map(|v| {
                    let mut set = Table::new();
                    for &(field, value) in &v.set {
                        let cfg = quantity::to_config(value, field.class());
                        match field {
                            ParamField::Pattern(a, part) => {
                                let entry = set
                                    .entry(lookup(&ANTENNAS, a).to_string())
                                    .or_insert_with(|| Value::Table(Table::new()));
                                if let Value::Table(sub) = entry {
                                    sub.insert(lookup(&PARTS, part).into(), cfg);
                                }
                            }
                            other => {
                                set.insert(other.name(), cfg);
                            }
                        }
                    }
                    let mut t = Table::new();
                    t.insert("label".into(), Value::String(v.label.clone()));
                    t.insert("set".into(), Value::Table(set));
                    Value::Table(t)
                })
                .collect();
            doc.insert("variant".into(), Value::Array(items));
        }
        toml::to_string(&doc).expect("a TOML table always serializes")
    }

    /// All parameter sets the scenario describes, series by series.
    pub fn points(&self) -> Result<Vec<Point>, CliError> {
        let base = [Variant {
            label: "base".into(),
            set: Vec::new(),
        }];
        let variants = if self.variants.is_empty() {
            &base[..]
        } else {
            &self.variants[..]
        };
        let mut out = Vec::new();
        for variant in variants {
            let mut params = self.params.clone();
            for &(field, v) in &variant.set {
                field.apply(&mut params, v)?;
            }
            match &self.sweep {
                None => out.push(Point {
                    series: variant.label.clone(),
                    value: None,
                    params,
                }),
                Some(sw) => {
                    for &v in &sw.values {
                        let mut p = params.clone();
                        for f in &sw.fields {
                            f.apply(&mut p, v)?;
                        }
                        out.push(Point {
                            series: variant.label.clone(),
                            value: Some(v),
                            params: p,
                        });
                    }
                }
            }
        }
        Ok(out)
    }

    /// Check every resolved parameter set before any work starts.
    pub fn validate(&self) -> Result<(), CliError> {
        self.inversion.validate()?;
        for point in self.points()? {
            point.params.validate().map_err(|e| {
                let at = point
                    .value
                    .map(|v| format!(" at sweep value {v}"))
                    .unwrap_or_default();
                config_err(format!("series '{}'{at}: {e}", point.series))
            })?;
            if point.params.d0 >= point.params.r_min {
                return Err(config_err(format!(
                    "series '{}': the reference link must be LOS, so d0 = {} m must be below r_min = {} m",
                    point.series, point.params.d0, point.params.r_min
                )));
            }
            if let Some(sim) = &self.sim {
                sim.validate(&point.params)?;
            }
        }
        Ok(())
    }
}
