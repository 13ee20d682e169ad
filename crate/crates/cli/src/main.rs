//! `isoforge`: character tables, block partitions and perfect isometry
//! certificates on the command line.
//!
//! Exit codes: 0 success, 1 a requested check failed (the certificate is
//! still written), 2 a bad request.

use std::io::Write;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use isoforge::blocks::{
    kor_blocks, theoretical_blocks, Block, BlockPartition, ClassPredicate, ClassSubset, Family,
};
use isoforge::chars_spin::{tilde_an_table, tilde_sn_table};
use isoforge::chars_sym_alt::{an_table, sn_table};
use isoforge::chars_wreath::{
    cyclic_base, dn_table, gpw_table, hpw_table, semidirect_base, wreath_table,
};
use isoforge::isometry::{negative_controls, r_commutation_check, NegativeControls};
use isoforge::{
    build_isometry, verify, CharLabel, CharTable, Kind, MapEntry, Mode, Params, Partition,
    VerificationReport,
};

const SCHEMA: &str = "isoforge-certificate/1";

#[derive(Parser)]
#[command(
    name = "isoforge",
    version,
    about = "Exact character tables, blocks and perfect isometry certificates"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print a character table.
    Table {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print the blocks of a table with respect to a class subset.
    Blocks {
        #[command(flatten)]
        group: GroupArgs,
        /// p-regular | spin-C | brgr-Cprime | osima-Cprime | fh-regular
        #[arg(long, default_value = "p-regular")]
        classes: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Build an isometry, verify it, and write a certificate.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args)]
struct GroupArgs {
    /// sn | an | tilde-sn | tilde-an | wreath | gpw | hpw | dn
    #[arg(long)]
    family: String,
    #[arg(long, allow_negative_numbers = true)]
    n: Option<i64>,
    /// Order of the cyclic base group (wreath).
    #[arg(long, allow_negative_numbers = true)]
    l: Option<i64>,
    /// The prime: base group of gpw and hpw, and the block prime for `blocks`.
    #[arg(long, allow_negative_numbers = true)]
    p: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    w: Option<i64>,
}

#[derive(clap::Args)]
struct VerifyArgs {
    /// mainAn | mainAn2 | mainAn_p2 | mainTilde | brouetilde | brgr | osima | couronne | dn_conj | dn_nonconj | fh
    #[arg(long)]
    kind: String,
    #[arg(long, allow_negative_numbers = true)]
    p: i64,
    /// Source core: a comma partition, or a tuple separated by ';' or '|'. Empty means ∅.
    #[arg(long, default_value = "")]
    core1: String,
    /// Target core, same syntax.
    #[arg(long, default_value = "")]
    core2: String,
    #[arg(long, allow_negative_numbers = true)]
    w: Option<i64>,
    /// Componentwise weights for couronne and type D, comma separated.
    #[arg(long)]
    weights: Option<String>,
    /// Degree of the symmetric group (osima, brgr): selects the principal block.
    #[arg(long, allow_negative_numbers = true)]
    n: Option<i64>,
    /// Order of the cyclic base group (couronne).
    #[arg(long, allow_negative_numbers = true)]
    l: Option<i64>,
    /// mainTilde: the source block lies in the alternating double cover.
    #[arg(long)]
    source_alt: bool,
    /// generalized | kor | broue; defaults to the mode the construction asserts.
    #[arg(long)]
    mode: Option<String>,
    /// Also run every single sign flip and target swap.
    #[arg(long)]
    controls: bool,
    /// Embed both character tables in the certificate.
    #[arg(long)]
    tables: bool,
    /// Write the certificate here instead of stdout.
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

/// A request the user got wrong; reported with exit code 2.
#[derive(Debug)]
struct BadRequest(String);

impl std::fmt::Display for BadRequest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for BadRequest {}

fn bad<T>(msg: impl Into<String>) -> Result<T> {
    Err(BadRequest(msg.into()).into())
}

fn nonneg(name: &str, v: Option<i64>) -> Result<Option<usize>> {
    match v {
        None => Ok(None),
        Some(x) if x >= 0 => Ok(Some(x as usize)),
        Some(x) => bad(format!("--{name} must be nonnegative, got {x}")),
    }
}

fn need(name: &str, v: Option<i64>) -> Result<usize> {
    nonneg(name, v)?.map_or_else(|| bad(format!("--{name} is required here")), Ok)
}

fn group(g: &GroupArgs) -> Result<(CharTable, Family)> {
    let lib = |r: isoforge::Result<CharTable>| r.map_err(|e| anyhow!(BadRequest(e.to_string())));
    Ok(match g.family.as_str() {
        "sn" => (sn_table(need("n", g.n)?), Family::Sym),
        "an" => (lib(an_table(need("n", g.n)?))?, Family::Alt),
        "tilde-sn" => (tilde_sn_table(need("n", g.n)?), Family::SpinSym),
        "tilde-an" => (lib(tilde_an_table(need("n", g.n)?))?, Family::SpinAlt),
        "wreath" => {
            let l = need("l", g.l)?;
            let base = cyclic_base(l).map_err(|e| BadRequest(e.to_string()))?;
            (wreath_table(&base, need("w", g.w)?), Family::Wreath(base))
        }
        "gpw" => {
            let p = need("p", g.p)?;
            let base = semidirect_base(p).map_err(|e| BadRequest(e.to_string()))?;
            (lib(gpw_table(p, need("w", g.w)?))?, Family::Wreath(base))
        }
        "hpw" => {
            let p = need("p", g.p)?;
            (lib(hpw_table(p, need("w", g.w)?))?, Family::Hpw(p))
        }
        "dn" => (lib(dn_table(need("n", g.n)?))?, Family::WeylD),
        other => return bad(format!("unknown family '{other}'")),
    })
}

#[derive(Serialize)]
struct ClassOut {
    label: String,
    central_order: u64,
}

#[derive(Serialize)]
struct TableOut {
    name: String,
    order: u64,
    classes: Vec<ClassOut>,
    characters: Vec<String>,
    values: Vec<Vec<String>>,
}

impl From<&CharTable> for TableOut {
    fn from(t: &CharTable) -> Self {
        TableOut {
            name: t.name.clone(),
            order: t.order,
            classes: t
                .classes
                .iter()
                .map(|c| ClassOut {
                    label: c.to_string(),
                    central_order: c.central_order,
                })
                .collect(),
            characters: t.chars.iter().map(|c| c.to_string()).collect(),
            values: t
                .values
                .iter()
                .map(|r| r.iter().map(|v| v.to_string()).collect())
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct BlockOut {
    characters: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    core: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    weight: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    sign: Option<i32>,
}

impl From<&Block> for BlockOut {
    fn from(b: &Block) -> Self {
        BlockOut {
            characters: b.chars.iter().map(|c| c.to_string()).collect(),
            core: b.core.clone(),
            weight: b.weight,
            sign: b.sign,
        }
    }
}

#[derive(Serialize)]
struct BlocksOut {
    group: String,
    p: usize,
    predicate: String,
    classes: Vec<String>,
    blocks: Vec<BlockOut>,
    /// Whether the Gram-closure blocks equal the predicted ones.
    agreement: bool,
}

fn blocks(t: &CharTable, family: &Family, p: usize, pred: &str) -> Result<BlocksOut> {
    if p < 2 {
        return bad(format!("--p must be a prime, got {p}"));
    }
    let all_in_one = |t: &CharTable| BlockPartition {
        blocks: vec![Block {
            chars: t.chars.clone(),
            core: None,
            weight: None,
            sign: None,
        }],
    };
    let (c, expected, spin_only) = match pred {
        "p-regular" => {
            let th = theoretical_blocks(t, p, family).map_err(|e| BadRequest(e.to_string()))?;
            (
                ClassSubset::resolve(t, family, ClassPredicate::PRegular(p)),
                th,
                false,
            )
        }
        "spin-C" => {
            if !matches!(family, Family::SpinSym | Family::SpinAlt) {
                return bad("spin-C needs a double cover family");
            }
            let th = theoretical_blocks(t, p, family).map_err(|e| BadRequest(e.to_string()))?;
            (
                ClassSubset::resolve(t, family, ClassPredicate::SpinEnlarged(p)),
                th,
                true,
            )
        }
        "brgr-Cprime" | "osima-Cprime" | "fh-regular" => {
            let (ok, which) = match (pred, family) {
                ("brgr-Cprime", Family::Wreath(b)) => (
                    b.table.num_chars() == p && b.table.order as usize == p * (p - 1),
                    ClassPredicate::LastEmpty,
                ),
                ("osima-Cprime", Family::Wreath(b)) => {
                    (b.table.order as usize == p, ClassPredicate::FirstEmpty)
                }
                ("fh-regular", Family::Hpw(q)) => (*q == p, ClassPredicate::LastEmpty),
                _ => (false, ClassPredicate::All),
            };
            if !ok {
                return bad(format!("{pred} does not apply to {} at p = {p}", t.name));
            }
            // the whole table is the image of a single block
            (ClassSubset::resolve(t, family, which), all_in_one(t), false)
        }
        other => return bad(format!("unknown class predicate '{other}'")),
    };
    let mut got = kor_blocks(t, &c);
    let mut expected = expected;
    if spin_only {
        let spin = |c: &CharLabel| c.spin;
        got = got.restricted(&spin);
        expected = expected.restricted(&spin);
    }
    let agreement = got.same_groups(&expected);
    let shown = if agreement { &expected } else { &got };
    Ok(BlocksOut {
        group: t.name.clone(),
        p,
        predicate: pred.to_string(),
        classes: c.labels.iter().map(|l| l.to_string()).collect(),
        blocks: shown.blocks.iter().map(BlockOut::from).collect(),
        agreement,
    })
}

fn parse_partition(s: &str) -> Result<Partition> {
    s.parse::<Partition>()
        .map_err(|e| anyhow!(BadRequest(e.to_string())))
}

fn parse_tuple(s: &str) -> Result<Vec<Partition>> {
    s.split([';', '|']).map(parse_partition).collect()
}

fn params(kind: Kind, a: &VerifyArgs) -> Result<Params> {
    let p = match a.p {
        x if x >= 2 => x as usize,
        x => return bad(format!("--p must be a prime, got {x}")),
    };
    if matches!(kind, Kind::Couronne | Kind::DnConj | Kind::DnNonconj) {
        let weights: Vec<usize> = match &a.weights {
            Some(w) => w
                .split(',')
                .map(|x| x.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| BadRequest(format!("bad --weights '{w}'")))?,
            None => return bad(format!("{kind} needs --weights")),
        };
        let mut pr = Params::tuple(p, parse_tuple(&a.core1)?, parse_tuple(&a.core2)?, weights);
        if kind == Kind::Couronne {
            pr.l = need("l", a.l)?;
        }
        return Ok(pr);
    }
    let mut core1 = parse_partition(&a.core1)?;
    let w = match (nonneg("n", a.n)?, nonneg("w", a.w)?) {
        (Some(n), w) => {
            if !matches!(kind, Kind::Osima | Kind::BrGr) {
                return bad("--n applies to osima and brgr only");
            }
            // principal block of S_n
            let lead = Partition::new(if n == 0 { vec![] } else { vec![n] })
                .map_err(|e| BadRequest(e.to_string()))?;
            core1 = lead.core(p);
            let wn = lead.weight(p);
            if w.is_some_and(|w| w != wn) {
                return bad(format!(
                    "--w {} disagrees with the weight {wn} of the principal block of S_{n}",
                    w.unwrap_or(0)
                ));
            }
            wn
        }
        (None, Some(w)) => w,
        (None, None) => return bad("--w (or --n for osima and brgr) is required"),
    };
    let mut pr = Params::single(p, w, core1, parse_partition(&a.core2)?);
    pr.source_alt = a.source_alt;
    Ok(pr)
}

#[derive(Serialize)]
struct Request {
    kind: Kind,
    mode: Mode,
    params: Params,
}

#[derive(Serialize)]
struct Environment {
    version: &'static str,
    determinism: &'static str,
}

#[derive(Serialize)]
struct IsometryOut {
    source: String,
    target: String,
    asserted_mode: Mode,
    map: Vec<MapEntry>,
}

#[derive(Serialize)]
struct Tables {
    source: TableOut,
    target: TableOut,
}

#[derive(Serialize)]
struct Certificate {
    schema: &'static str,
    request: Request,
    environment: Environment,
    isometry: IsometryOut,
    report: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    negative_controls: Option<NegativeControls>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tables: Option<Tables>,
    passed: bool,
}

fn certificate(a: &VerifyArgs) -> Result<Certificate> {
    let kind: Kind = a
        .kind
        .parse()
        .map_err(|e: isoforge::Error| BadRequest(e.to_string()))?;
    let pr = params(kind, a)?;
    let iso = build_isometry(kind, &pr).map_err(|e| BadRequest(e.to_string()))?;
    let mode = match &a.mode {
        Some(m) => m.parse::<Mode>().map_err(|e| BadRequest(e.to_string()))?,
        None => iso.asserted_mode(),
    };
    let mut report = verify(&iso, mode);
    report.r_commutation = Some(r_commutation_check(&iso).context("r-commutation check")?);
    let passed = report.passed();
    Ok(Certificate {
        schema: SCHEMA,
        request: Request {
            kind,
            mode,
            params: pr,
        },
        environment: Environment {
            version: env!("CARGO_PKG_VERSION"),
            determinism: "exact arithmetic, canonical class and character orders, no timing fields",
        },
        isometry: IsometryOut {
            source: iso.source.name.clone(),
            target: iso.target.name.clone(),
            asserted_mode: iso.asserted_mode(),
            map: iso.map.clone(),
        },
        negative_controls: a.controls.then(|| negative_controls(&iso, mode)),
        tables: a.tables.then(|| Tables {
            source: (&iso.source).into(),
            target: (&iso.target).into(),
        }),
        report,
        passed,
    })
}

fn render_certificate(c: &Certificate) -> String {
    let r = &c.report;
    let mut s = format!(
        "{} {} -> {} ({} characters), mode {:?}: {}\n",
        c.request.kind,
        c.isometry.source,
        c.isometry.target,
        c.isometry.map.len(),
        c.request.mode,
        if c.passed { "PASS" } else { "FAIL" }
    );
    for (name, chk) in [
        ("mixed vanishing", &r.mixed_vanishing),
        ("p-integrality", &r.broue_integrality),
        ("KOR Gram", &r.kor_gram),
        ("r-commutation", &r.r_commutation),
    ] {
        if let Some(chk) = chk {
            s.push_str(&format!(
                "  {name:16} {} ({} checked)",
                if chk.pass { "pass" } else { "FAIL" },
                chk.checked
            ));
            if let Some(w) = &chk.witness {
                s.push_str(&format!("  witness x = {}, y = {}: {}", w.x, w.y, w.value));
            }
            s.push('\n');
        }
    }
    for m in &c.isometry.map {
        s.push_str(&format!(
            "  {} -> {}{}\n",
            m.source,
            if m.sign < 0 { "-" } else { "" },
            m.target
        ));
    }
    s
}

fn render_blocks(b: &BlocksOut) -> String {
    let mut s = format!(
        "{} at p = {} on {} ({} classes), agreement {}\n",
        b.group,
        b.p,
        b.predicate,
        b.classes.len(),
        b.agreement
    );
    for (i, bl) in b.blocks.iter().enumerate() {
        let meta = match (&bl.core, bl.weight) {
            (Some(c), Some(w)) => format!(" core {c} weight {w}"),
            _ => String::new(),
        };
        s.push_str(&format!(
            "  block {}{meta}: {}\n",
            i + 1,
            bl.characters.join(" ")
        ));
    }
    s
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn emit(text: &str, out: Option<&std::path::Path>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn threads() -> Result<()> {
    if let Ok(v) = std::env::var("ISOFORGE_THREADS") {
        let n: usize = match v.trim().parse() {
            Ok(n) if n > 0 => n,
            _ => bail!(BadRequest(format!(
                "ISOFORGE_THREADS must be a positive integer, got '{v}'"
            ))),
        };
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    threads()?;
    match cli.cmd {
        Cmd::Table { group: g, format } => {
            let (t, _) = group(&g)?;
            let s = match format {
                Format::Json => json(&TableOut::from(&t))?,
                Format::Text => t.render_text(),
            };
            emit(&s, None)?;
            Ok(true)
        }
        Cmd::Blocks {
            group: g,
            classes,
            format,
        } => {
            let (t, family) = group(&g)?;
            let p = need("p", g.p)?;
            let b = blocks(&t, &family, p, &classes)?;
            let s = match format {
                Format::Json => json(&b)?,
                Format::Text => render_blocks(&b),
            };
            emit(&s, None)?;
            Ok(true)
        }
        Cmd::Verify(a) => {
            let c = certificate(&a)?;
            let s = match a.format {
                Format::Json => json(&c)?,
                Format::Text => render_certificate(&c),
            };
            emit(&s, a.out.as_deref())?;
            Ok(c.passed)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            e.exit()
        }
        Err(e) => {
            let msg = e.to_string();
            let line: Vec<&str> = msg
                .lines()
                .take_while(|l| !l.starts_with("Usage"))
                .map(str::trim)
                .filter(|l| !l.is_empty())
                .collect();
            eprintln!("isoforge: {}", line.join(" ").trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("isoforge: {e:#}");
            if e.downcast_ref::<BadRequest>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use isoforge::ExactScalar;

    #[test]
    fn corrupted_table_disagrees() {
        let mut t = sn_table(6);
        assert!(blocks(&t, &Family::Sym, 3, "p-regular").unwrap().agreement);
        // give the defect zero character (4,2) the values of the trivial one
        let i = t
            .chars
            .iter()
            .position(|c| c.to_string() == "chi(4,2)")
            .unwrap();
        t.values[i] = vec![ExactScalar::one(); t.classes.len()];
        let b = blocks(&t, &Family::Sym, 3, "p-regular").unwrap();
        assert!(!b.agreement);
    }

    #[test]
    fn tuples_split_on_either_separator() {
        assert_eq!(parse_tuple("2,1;").unwrap(), parse_tuple("2,1|").unwrap());
        assert_eq!(parse_tuple("").unwrap().len(), 1);
        assert!(parse_tuple("1;x").is_err());
    }
}
