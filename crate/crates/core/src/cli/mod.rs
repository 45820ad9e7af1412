//! The `green-ideals` command line.

mod cache;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::green::{is_mc_group, AlgebraPresentation, FunctorSpec, GreenFunctor};
use crate::grp::{caps, catalog, catalog_up_to, direct_product, parse_group_spec, set_caps, Caps, GroupRecord, GroupRef};
use crate::labels::{class_labels, display_name, slice_labels};
use crate::lattice::{build_poset, closed_sets, psi, theta, CLOSED_SET_LIMIT};
use crate::qburnside::is_b_group;
use crate::shifted::{is_bk_group, subgroup_over_k};
use crate::slice::t_slices;
use crate::verify;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "green-ideals", version, about = "Idempotents, MC-groups and ideal lattices of Green biset functors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the bundled catalog and any groups from --group-file.
    Catalog,
    /// Primitive idempotents of A(G) in the distinguished basis.
    Idempotents,
    /// B-groups up to --max-order.
    Bgroups,
    /// MC-groups of the functor, with their witnessing idempotents.
    McGroups,
    /// Slices (G,S) that are T-slices.
    TSlices,
    /// Subgroups X ≤ L×K with (X, p₂) a B_K-group; K comes from --functor shifted:K.
    BkGroups,
    /// The poset of MC-pairs up to mutual domination.
    Poset,
    /// Every idempotent-generated ideal, with its closed set of MC-pairs.
    Ideals,
    /// Run the self-check suites; exit 1 on any failure.
    Verify,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Tsv,
}

#[derive(Debug, Args)]
struct Common {
    /// burnside, slice or shifted:<K>.
    #[arg(long, global = true, default_value = "burnside")]
    functor: String,
    /// Group name; may be repeated.
    #[arg(long, global = true)]
    group: Vec<String>,
    /// JSON list of {name, degree, generators} records merged over the catalog.
    #[arg(long, global = true)]
    group_file: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 8)]
    max_order: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Size caps as base=N,product=M,closed_sets=L.
    #[arg(long, global = true)]
    caps: Option<String>,
    /// Worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Report timing on stderr.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,
}

/// Everything a command needs, resolved and validated.
pub struct RunConfig {
    pub functor: FunctorSpec,
    pub groups: Vec<GroupRef>,
    pub user_groups: Vec<GroupRef>,
    pub max_order: usize,
    pub caps: Caps,
    /// Most poset nodes for closed-set enumeration.
    pub closed_set_limit: usize,
    format: Format,
}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

fn parse_caps(s: &str) -> Result<(Caps, usize)> {
    let mut c = caps();
    let mut limit = CLOSED_SET_LIMIT;
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part.split_once('=').ok_or_else(|| Error::Usage(format!("bad cap {part:?}; expected key=value")))?;
        let value: usize = value.trim().parse().map_err(|_| Error::Usage(format!("bad cap value in {part:?}")))?;
        match key.trim() {
            "base" => c.base = value,
            "product" => c.product = value,
            "closed_sets" => limit = value,
            other => return usage(format!("unknown cap {other:?}; expected base, product or closed_sets")),
        }
    }
    Ok((c, limit))
}

fn load_group_file(path: &PathBuf) -> Result<(Vec<GroupRef>, String)> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
    let records: Vec<GroupRecord> =
        serde_json::from_str(&text).map_err(|e| Error::Usage(format!("{} is not a list of group records: {e}", path.display())))?;
    let groups = records.iter().map(GroupRecord::build).collect::<Result<Vec<_>>>()?;
    Ok((groups, text))
}

fn resolve_group(name: &str, user: &[GroupRef]) -> Result<GroupRef> {
    if let Some(g) = user.iter().find(|g| g.name() == name) {
        return Ok(g.clone());
    }
    parse_group_spec(name).map_err(as_usage)
}

fn as_usage(e: Error) -> Error {
    match e {
        Error::Validation(msg) => Error::Usage(msg),
        other => other,
    }
}

impl RunConfig {
    fn scan_groups(&self) -> Result<Vec<GroupRef>> {
        if !self.groups.is_empty() {
            return Ok(self.groups.clone());
        }
        if self.max_order > self.caps.base {
            return Err(Error::Resource { what: format!("--max-order {}", self.max_order), size: self.max_order, cap: self.caps.base });
        }
        let mut out = catalog_up_to(self.max_order);
        out.extend(self.user_groups.iter().filter(|g| g.order() <= self.max_order).cloned());
        Ok(out)
    }

    fn one_or_more_groups(&self) -> Result<&[GroupRef]> {
        if self.groups.is_empty() {
            return usage("this command needs --group");
        }
        Ok(&self.groups)
    }

    fn instance(&self) -> Result<std::sync::Arc<dyn GreenFunctor>> {
        self.functor.instance()
    }

    fn shifted_k(&self) -> Result<Option<GroupRef>> {
        match &self.functor {
            FunctorSpec::Shifted(k) => Ok(Some(parse_group_spec(k).map_err(as_usage)?)),
            _ => Ok(None),
        }
    }
}

/// Rendered output and the exit code it should produce.
struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, code: EXIT_OK }
    }
}

fn render_json(v: Value) -> String {
    serde_json::to_string_pretty(&v).expect("values serialize") + "\n"
}

/// `{"schema": 1, ...}` with the bound and functor stamped in.
fn envelope(kind: &str, cfg: &RunConfig, body: Value) -> Value {
    let mut v = json!({"schema": 1, "command": kind, "functor": cfg.functor.to_string()});
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    v
}

fn cmd_catalog(cfg: &RunConfig) -> Result<Output> {
    let rows: Vec<(String, usize, &str)> = catalog()
        .iter()
        .map(|g| (g.name().to_string(), g.order(), "bundled"))
        .chain(cfg.user_groups.iter().map(|g| (g.name().to_string(), g.order(), "user")))
        .collect();
    Ok(Output::ok(match cfg.format {
        Format::Tsv => rows.iter().fold("name\torder\tsource\n".to_string(), |mut s, (n, o, src)| {
            let _ = writeln!(s, "{n}\t{o}\t{src}");
            s
        }),
        _ => render_json(json!({
            "schema": 1,
            "command": "catalog",
            "groups": rows.iter().map(|(n, o, src)| json!({"name": n, "order": o, "source": src})).collect::<Vec<_>>(),
        })),
    }))
}

fn cmd_idempotents(cfg: &RunConfig) -> Result<Output> {
    let inst = cfg.instance()?;
    let mut all_ok = true;
    let mut groups = Vec::new();
    let mut tsv = String::from("group\tidempotent\tvalue\n");
    for g in cfg.one_or_more_groups()? {
        inst.admit(g)?;
        let p = AlgebraPresentation::build(inst.as_ref(), g);
        let check = p.verify(inst.as_ref())?;
        all_ok &= check.all();
        let name = display_name(g);
        let mut items = Vec::new();
        for (label, e) in p.idempotent_labels.iter().zip(&p.idempotents) {
            let value = inst.format(g, e);
            let _ = writeln!(tsv, "{name}\t{label}\t{value}");
            items.push(json!({"label": label, "value": value, "coefficients": inst.to_json(g, e)}));
        }
        groups.push(json!({
            "group": name,
            "order": g.order(),
            "basis": p.basis,
            "idempotents": items,
            "checks": {
                "idempotent": check.idempotent,
                "orthogonal": check.orthogonal,
                "complete": check.complete,
                "diagonalizes": check.diagonalizes,
            },
        }));
    }
    let text = match cfg.format {
        Format::Tsv => tsv,
        _ => render_json(envelope("idempotents", cfg, json!({"groups": groups}))),
    };
    Ok(Output { text, code: if all_ok { EXIT_OK } else { EXIT_FAILED } })
}

/// Positives of a per-group scan, each with its witness labels.
fn render_scan(kind: &str, cfg: &RunConfig, found: Vec<(String, Vec<String>)>) -> String {
    match cfg.format {
        Format::Tsv => found.iter().fold("group\twitnesses\n".to_string(), |mut s, (g, w)| {
            let _ = writeln!(s, "{g}\t{}", w.join(","));
            s
        }),
        _ => {
            let names: Vec<&String> = found.iter().map(|(g, _)| g).collect();
            let witnesses: BTreeMap<&String, &Vec<String>> = found.iter().map(|(g, w)| (g, w)).collect();
            let body = json!({"bound": cfg.max_order, "groups": names, "witnesses": witnesses});
            render_json(envelope(kind, cfg, body))
        }
    }
}

fn scan(groups: &[GroupRef], f: impl Fn(&GroupRef) -> Result<Vec<String>> + Sync + Send) -> Result<Vec<(String, Vec<String>)>> {
    let hits: Vec<Vec<String>> = groups.par_iter().map(f).collect::<Result<_>>()?;
    Ok(groups.iter().zip(hits).filter(|(_, w)| !w.is_empty()).map(|(g, w)| (display_name(g), w)).collect())
}

fn cmd_detect(cmd: &Command, cfg: &RunConfig) -> Result<Output> {
    let groups = cfg.scan_groups()?;
    let (kind, found) = match cmd {
        Command::Bgroups => (
            "bgroups",
            scan(&groups, |g| {
                let top = g.lattice().classes().len() - 1;
                Ok(if is_b_group(g).is_b_group { vec![format!("e_{}", class_labels(g)[top])] } else { vec![] })
            })?,
        ),
        Command::McGroups => {
            let inst = cfg.instance()?;
            let found = scan(&groups, |g| {
                inst.admit(g)?;
                let labels = inst.idempotent_labels(g);
                Ok(is_mc_group(inst.as_ref(), g)?.witnesses.into_iter().map(|i| labels[i].clone()).collect())
            })?;
            ("mc-groups", found)
        }
        Command::TSlices => (
            "t-slices",
            scan(&groups, |g| {
                let full = g.lattice().full();
                let labels = slice_labels(g);
                Ok(t_slices(g)
                    .into_iter()
                    .map(|s| labels[g.slice_classes().class_of(full, s).expect("a slice")].clone())
                    .collect())
            })?,
        ),
        Command::BkGroups => {
            let Some(k) = cfg.shifted_k()? else {
                return usage("bk-groups needs --functor shifted:<K>");
            };
            let found = scan(&groups, |l| {
                let lk = direct_product(l, &k)?.group;
                let labels = class_labels(&lk);
                let lat = lk.lattice();
                let mut out = Vec::new();
                for (c, cls) in lat.classes().iter().enumerate() {
                    if is_bk_group(&subgroup_over_k(l, &k, lat.subgroup(cls.rep).bits())?).is_bk {
                        out.push(labels[c].clone());
                    }
                }
                Ok(out)
            })?;
            ("bk-groups", found)
        }
        _ => unreachable!("not a scan"),
    };
    Ok(Output::ok(render_scan(kind, cfg, found)))
}

fn cmd_poset(cfg: &RunConfig) -> Result<Output> {
    let inst = cfg.instance()?;
    let poset = build_poset(inst.as_ref(), cfg.max_order)?;
    Ok(Output::ok(match cfg.format {
        Format::Dot => poset.to_dot(),
        Format::Tsv => poset.to_tsv(),
        Format::Json => render_json(envelope("poset", cfg, poset.to_json())),
    }))
}

fn cmd_ideals(cfg: &RunConfig) -> Result<Output> {
    let inst = cfg.instance()?;
    let poset = build_poset(inst.as_ref(), cfg.max_order)?;
    let sets = closed_sets(&poset, cfg.closed_set_limit)?;
    let mut rows = Vec::new();
    let mut tsv = String::from("ideal\tgenerators\ttheta\tnonzero_at\n");
    for (n, b) in sets.iter().enumerate() {
        let ideal = psi(inst.as_ref(), &poset, b)?;
        let back = theta(&poset, &ideal)?;
        let nonzero: Vec<String> = ideal.parts.iter().filter(|(_, v)| !v.is_empty()).map(|(g, _)| display_name(g)).collect();
        let _ = writeln!(tsv, "{n}\t{}\t{}\t{}", b.labels(&poset).join(","), back.labels(&poset).join(","), nonzero.join(","));
        rows.push(json!({
            "generators": b.labels(&poset),
            "theta": back.labels(&poset),
            "ideal": ideal.to_json(inst.as_ref()),
        }));
    }
    Ok(Output::ok(match cfg.format {
        Format::Tsv => tsv,
        _ => render_json(envelope("ideals", cfg, json!({"bound": cfg.max_order, "nodes": poset.labels, "ideals": rows}))),
    }))
}

fn cmd_verify(cfg: &RunConfig) -> Result<Output> {
    let reports = match cfg.shifted_k()? {
        Some(k) => verify::run_shifted(&k, cfg.max_order)?,
        None => verify::run(cfg.instance()?.as_ref(), None, cfg.max_order)?,
    };
    let failures: Vec<String> = reports.iter().flat_map(|r| r.failures.iter().map(move |f| format!("{}: {f}", r.suite))).collect();
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    let code = if failures.is_empty() { EXIT_OK } else { EXIT_FAILED };
    let text = match cfg.format {
        Format::Tsv => reports.iter().fold("suite\tcases\tfailures\n".to_string(), |mut s, r| {
            let _ = writeln!(s, "{}\t{}\t{}", r.suite, r.cases, r.failures.len());
            s
        }),
        _ => render_json(envelope("verify", cfg, json!({"bound": cfg.max_order, "cases": cases, "failures": failures, "suites": reports}))),
    };
    Ok(Output { text, code })
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Catalog => "catalog",
        Command::Idempotents => "idempotents",
        Command::Bgroups => "bgroups",
        Command::McGroups => "mc-groups",
        Command::TSlices => "t-slices",
        Command::BkGroups => "bk-groups",
        Command::Poset => "poset",
        Command::Ideals => "ideals",
        Command::Verify => "verify",
    }
}

fn configure(cli: &Cli) -> Result<(RunConfig, String)> {
    let c = &cli.common;
    let functor: FunctorSpec = c.functor.parse()?;
    if cli.common.format == Format::Dot && !matches!(cli.command, Command::Poset) {
        return usage("--format dot is only available for poset");
    }
    let (caps, closed_set_limit) = match &c.caps {
        Some(s) => parse_caps(s)?,
        None => (caps(), CLOSED_SET_LIMIT),
    };
    set_caps(caps);
    if let Some(j) = c.jobs {
        if j == 0 {
            return usage("--jobs must be positive");
        }
        // a pool may already exist when called twice in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
    let (user_groups, user_text) = match &c.group_file {
        Some(p) => load_group_file(p)?,
        None => (vec![], String::new()),
    };
    let groups = c.group.iter().map(|n| resolve_group(n, &user_groups)).collect::<Result<Vec<_>>>()?;
    let key = format!(
        "{}|{}|{:?}|{}|{}|{:?}|{:?}|{}|{}",
        env!("CARGO_PKG_VERSION"),
        command_name(&cli.command),
        c.group,
        functor,
        c.max_order,
        c.format,
        caps,
        closed_set_limit,
        user_text
    );
    functor.instance()?;
    Ok((RunConfig { functor, groups, user_groups, max_order: c.max_order, caps, closed_set_limit, format: c.format }, key))
}

fn execute(cli: &Cli) -> Result<Output> {
    let (cfg, key) = configure(cli)?;
    let cache = cache::Cache::from_env();
    if let Some(text) = cache.as_ref().and_then(|c| c.get(&key)) {
        return Ok(Output::ok(text));
    }
    let out = match &cli.command {
        Command::Catalog => cmd_catalog(&cfg),
        Command::Idempotents => cmd_idempotents(&cfg),
        cmd @ (Command::Bgroups | Command::McGroups | Command::TSlices | Command::BkGroups) => cmd_detect(cmd, &cfg),
        Command::Poset => cmd_poset(&cfg),
        Command::Ideals => cmd_ideals(&cfg),
        Command::Verify => cmd_verify(&cfg),
    }?;
    if out.code == EXIT_OK {
        if let Some(c) = &cache {
            c.put(&key, &out.text);
        }
    }
    Ok(out)
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_) | Error::Validation(_) => EXIT_USAGE,
        Error::Resource { .. } => EXIT_RESOURCE,
        Error::Assertion(_) | Error::ShapeViolation { .. } => EXIT_FAILED,
    }
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let start = Instant::now();
    let result = execute(&cli);
    if cli.common.verbose > 0 {
        eprintln!("{} finished in {:.2?}", command_name(&cli.command), start.elapsed());
    }
    match result {
        Ok(out) => {
            let written = match &cli.common.out {
                Some(p) => std::fs::write(p, &out.text).map_err(|e| format!("cannot write {}: {e}", p.display())),
                None => {
                    print!("{}", out.text);
                    Ok(())
                }
            };
            if let Err(msg) = written {
                eprintln!("error: {msg}");
                return EXIT_USAGE;
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Resource { .. } = e {
                eprintln!("hint: lower --max-order, query a single --group, or raise --caps");
            }
            exit_code(&e)
        }
    }
}
