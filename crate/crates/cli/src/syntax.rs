//! Structure files: the object graph, its line-oriented text syntax and its
//! canonical JSON form.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

pub const FORMAT_TAG: &str = "gammalab-structure";
pub const FORMAT_VERSION: u32 = 1;

/// An element written either as an index or as a carrier label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRef {
    Index(usize),
    Label(String),
}

impl fmt::Display for ElemRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElemRef::Index(i) => write!(f, "{}", i),
            ElemRef::Label(l) => write!(f, "{}", l),
        }
    }
}

impl ElemRef {
    pub fn parse(token: &str) -> Self {
        token
            .parse()
            .map(ElemRef::Index)
            .unwrap_or_else(|_| ElemRef::Label(token.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MonoidDecl {
    pub name: String,
    /// `boolean`, `z2`, `chain K`, `cyclic K` or `trunc-tropical K`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub size: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zero: Option<ElemRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub add: Option<Vec<Vec<ElemRef>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixRecipe {
    pub base: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub layout: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MuPatch {
    pub args: Vec<ElemRef>,
    pub params: Vec<ElemRef>,
    pub value: ElemRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SemiringDecl {
    pub name: String,
    pub arity: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixRecipe>,
    /// Additive monoid of endomaps, with `gamma_maps` generating Γ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endo: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub gamma_maps: Vec<Vec<ElemRef>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<Vec<ElemRef>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub set: Vec<MuPatch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActionTable {
    pub slot: usize,
    /// Indexed by `context · |M| + m`.
    pub table: Vec<ElemRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ActPatch {
    pub slot: usize,
    pub t: Vec<ElemRef>,
    pub g: Vec<ElemRef>,
    pub m: ElemRef,
    pub value: ElemRef,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    Regular,
    Scalar,
    Zero,
    Table,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleDecl {
    pub name: String,
    pub over: String,
    pub slots: Vec<usize>,
    pub construction: Construction,
    /// Carrier monoid for scalar and table modules.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub carrier: Option<String>,
    /// Units `(t, γ)` of a scalar module.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<(ElemRef, ElemRef)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub actions: Vec<ActionTable>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub set: Vec<ActPatch>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDecl {
    pub name: String,
    pub from: String,
    pub to: String,
    pub map: Vec<ElemRef>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConflationDecl {
    pub name: String,
    pub inflation: String,
    pub deflation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDecl {
    pub directive: String,
    #[serde(default)]
    pub args: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Item {
    Monoid(MonoidDecl),
    Semiring(SemiringDecl),
    Module(ModuleDecl),
    Morphism(MorphismDecl),
    Conflation(ConflationDecl),
    Check(CheckDecl),
}

impl Item {
    pub fn name(&self) -> Option<&str> {
        match self {
            Item::Monoid(d) => Some(&d.name),
            Item::Semiring(d) => Some(&d.name),
            Item::Module(d) => Some(&d.name),
            Item::Morphism(d) => Some(&d.name),
            Item::Conflation(d) => Some(&d.name),
            Item::Check(_) => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub format: String,
    pub version: u32,
    pub items: Vec<Item>,
}

impl Document {
    pub fn new(items: Vec<Item>) -> Self {
        Document {
            format: FORMAT_TAG.into(),
            version: FORMAT_VERSION,
            items,
        }
    }

    /// The canonical serialization: pretty JSON with a trailing newline.
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }
}

/// 1-based source position.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.col)
    }
}

/// Positions of an item and of its fields.
#[derive(Clone, Debug, Default)]
pub struct Spans {
    pub item: Pos,
    pub fields: BTreeMap<String, Pos>,
}

impl Spans {
    pub fn field(&self, name: &str) -> Pos {
        self.fields.get(name).copied().unwrap_or(self.item)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Option<Pos>,
    pub message: String,
}

impl Diagnostic {
    pub fn at(pos: Pos, message: impl Into<String>) -> Self {
        Diagnostic {
            pos: Some(pos),
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pos {
            Some(p) => write!(f, "{}: {}", p, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// A parsed file with one `Spans` per item.
#[derive(Clone, Debug)]
pub struct StructureFile {
    pub document: Document,
    pub spans: Vec<Spans>,
}

/// Parses either syntax: JSON when the first non-blank character is `{`.
pub fn parse_structure(src: &str) -> Result<StructureFile, Diagnostic> {
    if src.trim_start().starts_with('{') {
        parse_canonical(src)
    } else {
        parse_text(src)
    }
}

pub fn parse_canonical(src: &str) -> Result<StructureFile, Diagnostic> {
    let document: Document = serde_json::from_str(src).map_err(|e| {
        Diagnostic::at(
            Pos {
                line: e.line(),
                col: e.column(),
            },
            e.to_string(),
        )
    })?;
    if document.format != FORMAT_TAG || document.version != FORMAT_VERSION {
        return Err(Diagnostic {
            pos: None,
            message: format!(
                "unsupported format {:?} version {} (expected {:?} version {})",
                document.format, document.version, FORMAT_TAG, FORMAT_VERSION
            ),
        });
    }
    let spans = document.items.iter().map(|_| Spans::default()).collect();
    Ok(StructureFile { document, spans })
}

#[derive(Clone, Debug)]
struct Token {
    text: String,
    pos: Pos,
}

#[derive(Debug)]
struct Prop {
    key: Token,
    /// One row per source line.
    rows: Vec<Vec<Token>>,
}

impl Prop {
    fn values(&self) -> Vec<&Token> {
        self.rows.iter().flatten().collect()
    }
}

#[derive(Debug)]
struct Section {
    kind: Token,
    name: Token,
    props: Vec<Prop>,
}

fn keywords(kind: &str) -> &'static [&'static str] {
    match kind {
        "monoid" => &["builtin", "size", "zero", "labels", "add"],
        "semiring" => &["arity", "matrix", "endo", "gamma-map", "t", "gamma", "mu", "set"],
        "module" => &[
            "over", "slots", "regular", "scalar", "zero", "carrier", "unit", "action", "set",
        ],
        "morphism" => &["from", "to", "map"],
        "conflation" => &["inflation", "deflation"],
        _ => &[],
    }
}

/// Properties whose values may continue on following lines.
const MULTILINE: &[&str] = &["add", "mu", "action", "map", "labels"];

fn tokenize(line: &str, lineno: usize) -> Vec<Token> {
    let code = line.split('#').next().unwrap_or("");
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in code.char_indices().chain(std::iter::once((code.len(), ' '))) {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token {
                    text: code[s..i].to_string(),
                    pos: Pos {
                        line: lineno,
                        col: code[..s].chars().count() + 1,
                    },
                });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    out
}

enum Entry {
    Section(Section),
    Check(Token, Vec<Token>),
}

pub fn parse_text(src: &str) -> Result<StructureFile, Diagnostic> {
    let mut entries: Vec<Entry> = Vec::new();
    for (i, line) in src.lines().enumerate() {
        let lineno = i + 1;
        let tokens = tokenize(line, lineno);
        let Some(first) = tokens.first() else { continue };
        let indented = first.pos.col > 1;
        if !indented {
            match first.text.as_str() {
                "check" => {
                    let Some(d) = tokens.get(1) else {
                        return Err(Diagnostic::at(first.pos, "check needs a directive name"));
                    };
                    entries.push(Entry::Check(d.clone(), tokens[2..].to_vec()));
                }
                kind if !keywords(kind).is_empty() => {
                    let Some(name) = tokens.get(1) else {
                        return Err(Diagnostic::at(first.pos, format!("{} needs a name", kind)));
                    };
                    if let Some(extra) = tokens.get(2) {
                        return Err(Diagnostic::at(
                            extra.pos,
                            format!("unexpected {:?} after the name", extra.text),
                        ));
                    }
                    entries.push(Entry::Section(Section {
                        kind: first.clone(),
                        name: name.clone(),
                        props: Vec::new(),
                    }));
                }
                other => {
                    return Err(Diagnostic::at(first.pos, format!("unknown section {:?}", other)));
                }
            }
            continue;
        }
        let Some(Entry::Section(section)) = entries.last_mut() else {
            return Err(Diagnostic::at(first.pos, "indented line outside a section"));
        };
        if keywords(&section.kind.text).contains(&first.text.as_str()) {
            section.props.push(Prop {
                key: first.clone(),
                rows: vec![tokens[1..].to_vec()],
            });
        } else {
            match section.props.last_mut() {
                Some(p) if MULTILINE.contains(&p.key.text.as_str()) => {
                    if p.rows.len() == 1 && p.rows[0].is_empty() {
                        p.rows[0] = tokens;
                    } else {
                        p.rows.push(tokens);
                    }
                }
                _ => {
                    return Err(Diagnostic::at(
                        first.pos,
                        format!(
                            "unknown key {:?} in {} {}",
                            first.text, section.kind.text, section.name.text
                        ),
                    ))
                }
            }
        }
    }
    let mut items = Vec::new();
    let mut spans = Vec::new();
    for e in entries {
        match e {
            Entry::Check(d, args) => {
                let mut sp = Spans {
                    item: d.pos,
                    fields: BTreeMap::new(),
                };
                for (i, a) in args.iter().enumerate() {
                    sp.fields.insert(format!("arg{}", i), a.pos);
                }
                items.push(Item::Check(CheckDecl {
                    directive: d.text,
                    args: args.into_iter().map(|t| t.text).collect(),
                }));
                spans.push(sp);
            }
            Entry::Section(s) => {
                let (item, sp) = build_item(s)?;
                items.push(item);
                spans.push(sp);
            }
        }
    }
    Ok(StructureFile {
        document: Document::new(items),
        spans,
    })
}

struct Fields<'a> {
    section: &'a Section,
    spans: Spans,
}

impl<'a> Fields<'a> {
    fn all(&mut self, key: &str) -> Vec<&'a Prop> {
        let props: Vec<&Prop> = self.section.props.iter().filter(|p| p.key.text == key).collect();
        if let Some(p) = props.first() {
            self.spans.fields.entry(key.to_string()).or_insert(p.key.pos);
        }
        props
    }

    fn one(&mut self, key: &str) -> Result<Option<&'a Prop>, Diagnostic> {
        let props = self.all(key);
        if let Some(dup) = props.get(1) {
            return Err(Diagnostic::at(dup.key.pos, format!("{:?} given twice", key)));
        }
        Ok(props.first().copied())
    }

    fn required(&mut self, key: &str) -> Result<&'a Prop, Diagnostic> {
        self.one(key)?.ok_or_else(|| {
            Diagnostic::at(
                self.section.name.pos,
                format!(
                    "{} {} is missing {:?}",
                    self.section.kind.text, self.section.name.text, key
                ),
            )
        })
    }

    fn word(&mut self, key: &str) -> Result<Option<String>, Diagnostic> {
        match self.one(key)? {
            None => Ok(None),
            Some(p) => {
                let v = p.values();
                if v.len() != 1 {
                    return Err(Diagnostic::at(p.key.pos, format!("{:?} takes one value", key)));
                }
                Ok(Some(v[0].text.clone()))
            }
        }
    }

    fn flag(&mut self, key: &str) -> Result<Option<&'a Prop>, Diagnostic> {
        self.one(key)
    }
}

fn number(t: &Token) -> Result<usize, Diagnostic> {
    t.text
        .parse()
        .map_err(|_| Diagnostic::at(t.pos, format!("expected a number, found {:?}", t.text)))
}

fn numbers(tokens: &[&Token]) -> Result<Vec<usize>, Diagnostic> {
    tokens.iter().map(|t| number(t)).collect()
}

fn elems(tokens: &[&Token]) -> Vec<ElemRef> {
    tokens.iter().map(|t| ElemRef::parse(&t.text)).collect()
}

/// `key=a,b,c` pairs of a `set` line.
fn key_values(p: &Prop, keys: &[&str]) -> Result<BTreeMap<String, (Vec<ElemRef>, Pos)>, Diagnostic> {
    let mut out = BTreeMap::new();
    for t in p.values() {
        let Some((k, v)) = t.text.split_once('=') else {
            return Err(Diagnostic::at(t.pos, format!("expected key=value, found {:?}", t.text)));
        };
        if !keys.contains(&k) {
            return Err(Diagnostic::at(t.pos, format!("unknown key {:?} in set", k)));
        }
        let vals = if v.is_empty() {
            Vec::new()
        } else {
            v.split(',').map(ElemRef::parse).collect()
        };
        out.insert(k.to_string(), (vals, t.pos));
    }
    for k in keys {
        if !out.contains_key(*k) {
            return Err(Diagnostic::at(p.key.pos, format!("set is missing {}=", k)));
        }
    }
    Ok(out)
}

fn single(kv: &BTreeMap<String, (Vec<ElemRef>, Pos)>, key: &str) -> Result<ElemRef, Diagnostic> {
    let (v, pos) = &kv[key];
    match v.as_slice() {
        [x] => Ok(x.clone()),
        _ => Err(Diagnostic::at(*pos, format!("{} takes one value", key))),
    }
}

fn build_item(s: Section) -> Result<(Item, Spans), Diagnostic> {
    let name = s.name.text.clone();
    let mut f = Fields {
        section: &s,
        spans: Spans {
            item: s.kind.pos,
            fields: BTreeMap::new(),
        },
    };
    let item = match s.kind.text.as_str() {
        "monoid" => {
            let builtin = f
                .one("builtin")?
                .map(|p| p.values().iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" "));
            let size = match f.one("size")? {
                Some(p) => Some(number(
                    p.values()
                        .first()
                        .ok_or_else(|| Diagnostic::at(p.key.pos, "size needs a value"))?,
                )?),
                None => None,
            };
            let zero = f.word("zero")?.map(|w| ElemRef::parse(&w));
            let labels = f
                .one("labels")?
                .map(|p| p.values().iter().map(|t| t.text.clone()).collect());
            let add = f.one("add")?.map(|p| {
                p.rows
                    .iter()
                    .map(|r| r.iter().map(|t| ElemRef::parse(&t.text)).collect())
                    .collect()
            });
            Item::Monoid(MonoidDecl {
                name,
                builtin,
                size,
                zero,
                labels,
                add,
            })
        }
        "semiring" => {
            let arity = number(
                f.required("arity")?
                    .values()
                    .first()
                    .ok_or_else(|| Diagnostic::at(s.name.pos, "arity needs a value"))?,
            )?;
            let matrix = match f.one("matrix")? {
                None => None,
                Some(p) => {
                    let v = p.values();
                    if v.len() < 2 || v.len() > 3 {
                        return Err(Diagnostic::at(p.key.pos, "matrix takes: BASE DIM [LAYOUT]"));
                    }
                    Some(MatrixRecipe {
                        base: v[0].text.clone(),
                        dim: number(v[1])?,
                        layout: v.get(2).map(|t| t.text.clone()),
                    })
                }
            };
            let endo = f.word("endo")?;
            let gamma_maps = f.all("gamma-map").iter().map(|p| elems(&p.values())).collect();
            let t = f.word("t")?;
            let gamma = f.word("gamma")?;
            let mu = f.one("mu")?.map(|p| elems(&p.values()));
            let mut set = Vec::new();
            for p in f.all("set") {
                let kv = key_values(p, &["args", "params", "value"])?;
                set.push(MuPatch {
                    args: kv["args"].0.clone(),
                    params: kv["params"].0.clone(),
                    value: single(&kv, "value")?,
                });
            }
            Item::Semiring(SemiringDecl {
                name,
                arity,
                matrix,
                endo,
                gamma_maps,
                t,
                gamma,
                mu,
                set,
            })
        }
        "module" => {
            let over = f
                .word("over")?
                .ok_or_else(|| Diagnostic::at(s.name.pos, format!("module {} is missing \"over\"", s.name.text)))?;
            let slots = numbers(&f.required("slots")?.values())?;
            let mut constructions = Vec::new();
            let mut carrier = f.word("carrier")?;
            if let Some(p) = f.flag("regular")? {
                constructions.push((Construction::Regular, p.key.pos));
            }
            if let Some(p) = f.flag("zero")? {
                constructions.push((Construction::Zero, p.key.pos));
            }
            if let Some(p) = f.one("scalar")? {
                let v = p.values();
                if v.len() != 1 {
                    return Err(Diagnostic::at(p.key.pos, "scalar takes the carrier monoid name"));
                }
                if carrier.is_some() {
                    return Err(Diagnostic::at(p.key.pos, "scalar already names the carrier"));
                }
                carrier = Some(v[0].text.clone());
                constructions.push((Construction::Scalar, p.key.pos));
            }
            let actions_props = f.all("action");
            if !actions_props.is_empty() {
                constructions.push((Construction::Table, actions_props[0].key.pos));
            }
            let construction = match constructions.as_slice() {
                [(c, _)] => c.clone(),
                [] => {
                    return Err(Diagnostic::at(
                        s.name.pos,
                        format!(
                            "module {} needs one of regular, scalar, zero or action tables",
                            s.name.text
                        ),
                    ))
                }
                [_, (_, pos), ..] => return Err(Diagnostic::at(*pos, "conflicting module constructions")),
            };
            let mut actions = Vec::new();
            for p in actions_props {
                let v = p.values();
                let (slot, rest) = v
                    .split_first()
                    .ok_or_else(|| Diagnostic::at(p.key.pos, "action needs a slot"))?;
                actions.push(ActionTable {
                    slot: number(slot)?,
                    table: elems(rest),
                });
            }
            let unit = match f.one("unit")? {
                None => None,
                Some(p) => match p.values().as_slice() {
                    [a, b] => Some((ElemRef::parse(&a.text), ElemRef::parse(&b.text))),
                    _ => return Err(Diagnostic::at(p.key.pos, "unit takes: T-ELEMENT GAMMA-ELEMENT")),
                },
            };
            let mut set = Vec::new();
            for p in f.all("set") {
                let kv = key_values(p, &["slot", "t", "g", "m", "value"])?;
                let slot = match single(&kv, "slot")? {
                    ElemRef::Index(i) => i,
                    ElemRef::Label(l) => {
                        return Err(Diagnostic::at(
                            kv["slot"].1,
                            format!("slot must be a number, found {:?}", l),
                        ))
                    }
                };
                set.push(ActPatch {
                    slot,
                    t: kv["t"].0.clone(),
                    g: kv["g"].0.clone(),
                    m: single(&kv, "m")?,
                    value: single(&kv, "value")?,
                });
            }
            Item::Module(ModuleDecl {
                name,
                over,
                slots,
                construction,
                carrier,
                unit,
                actions,
                set,
            })
        }
        "morphism" => Item::Morphism(MorphismDecl {
            name,
            from: f
                .word("from")?
                .ok_or_else(|| Diagnostic::at(s.name.pos, "morphism is missing \"from\""))?,
            to: f
                .word("to")?
                .ok_or_else(|| Diagnostic::at(s.name.pos, "morphism is missing \"to\""))?,
            map: elems(&f.required("map")?.values()),
        }),
        "conflation" => Item::Conflation(ConflationDecl {
            name,
            inflation: f
                .word("inflation")?
                .ok_or_else(|| Diagnostic::at(s.name.pos, "conflation is missing \"inflation\""))?,
            deflation: f
                .word("deflation")?
                .ok_or_else(|| Diagnostic::at(s.name.pos, "conflation is missing \"deflation\""))?,
        }),
        other => unreachable!("section kind {}", other),
    };
    let spans = f.spans;
    Ok((item, spans))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# two-element semilattice
monoid B
  labels o i
  zero o
  add
    o i
    i i

semiring B3
  matrix boolean 1
  arity 3

module R
  over B3
  slots 2 3
  regular

check check-semiring B3
";

    #[test]
    fn parses_sections_and_rows() {
        let f = parse_text(SAMPLE).unwrap();
        assert_eq!(f.document.items.len(), 4);
        let Item::Monoid(m) = &f.document.items[0] else {
            panic!()
        };
        assert_eq!(m.add.as_ref().unwrap().len(), 2);
        assert_eq!(m.zero, Some(ElemRef::Label("o".into())));
        assert_eq!(f.spans[0].field("add"), Pos { line: 5, col: 3 });
        let Item::Check(c) = &f.document.items[3] else { panic!() };
        assert_eq!(c.directive, "check-semiring");
        assert_eq!(c.args, ["B3"]);
    }

    #[test]
    fn canonical_round_trip() {
        let f = parse_text(SAMPLE).unwrap();
        let json = f.document.to_canonical();
        let g = parse_structure(&json).unwrap();
        assert_eq!(g.document, f.document);
        assert_eq!(g.document.to_canonical(), json);
    }

    #[test]
    fn rejects_unknown_keys() {
        let err = parse_text("monoid B\n  sise 2\n").unwrap_err();
        assert_eq!(err.pos, Some(Pos { line: 2, col: 3 }));
        let json = r#"{"format":"gammalab-structure","version":1,"items":[{"kind":"monoid","name":"B","colour":1}]}"#;
        assert!(parse_canonical(json).unwrap_err().message.contains("colour"));
    }
}
