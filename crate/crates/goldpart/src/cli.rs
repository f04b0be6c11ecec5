//! Command-line surface over the library: verification runs, the square
//! table, per-subset queries, crookedness checks, matrix export.
//!
//! Conventions shared by every subcommand:
//!
//! * prose goes to stdout by default; `--json` switches stdout to the
//!   canonical report (pretty JSON, or CSV for `table`, raw text for
//!   `export`);
//! * `--out FILE` writes those same canonical bytes to a file;
//! * reports are deterministic for a fixed seed — wall-clock timing goes
//!   to stderr so byte-identical reruns stay byte-identical;
//! * exit codes: 0 success, 1 a verification check failed, 2 bad usage or
//!   parameters, 3 a compute budget refused the request.

use std::fs;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use goldpart::codes::{build_b, build_h, build_h_alpha_p, check_theorem_pairs, AffineCodeSpec};
use goldpart::crooked::{check_crooked, CrookedReport, PermTable};
use goldpart::field::{FieldElement, Modulus};
use goldpart::gold::{valid_exponents, GoldParams};
use goldpart::partition::{coincidence_check, verify_partition, VerifyMode};
use goldpart::squares::count_two_color_squares;
use goldpart::subsets::SubsetVec;
use goldpart::symmetry::{canonical_reps, check_lemmas, s_class, SClass};
use goldpart::{CheckReport, Error, ParamsEcho, Result};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(
    name = "goldpart",
    version,
    about = "Hamming-like partitions of the hypercube from Gold power maps: build, verify, count"
)]
pub struct Cli {
    /// Field degree m (the cube has 2^m coordinates; odd m for Gold maps)
    #[arg(long, global = true)]
    pub m: Option<usize>,

    /// Gold exponent parameter s, i.e. the map x^(2^s + 1)
    #[arg(long, global = true, default_value_t = 1)]
    pub s: usize,

    /// Modulus polynomial override in hex (e.g. 0x29); default is the
    /// smallest irreducible polynomial of degree m
    #[arg(long, global = true)]
    pub modulus: Option<String>,

    /// Seed for all randomized checks
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,

    /// Worker threads for counting (0 = one per CPU, capped)
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,

    /// Permit long-running sizes (the m = 11 square counts)
    #[arg(long, global = true)]
    pub long: bool,

    /// Also write the canonical report (JSON/CSV) to this file
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Print the canonical report on stdout instead of prose
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub cmd: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Run the partition, rank, isometry and coincidence checks
    Verify {
        /// exhaustive walks every subset (m = 3 only); sampled draws random ones
        #[arg(long, value_enum, default_value = "sampled")]
        mode: Mode,
        /// Samples per check (default: 1000 for m <= 9, else 200)
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Two-colored-square counts for every exponent of a degree, as CSV
    Table,
    /// Cell index (color) and orbit class of one odd subset
    Color {
        /// Subset as the hex bit-vector produced by this tool
        #[arg(long)]
        subset: Option<String>,
        /// Subset as comma-separated field elements, e.g. 0,1,2
        #[arg(long)]
        elems: Option<String>,
    },
    /// Orbit class of one odd subset plus its class's canonical representative
    Orbit {
        #[arg(long)]
        subset: Option<String>,
        #[arg(long)]
        elems: Option<String>,
    },
    /// Count the two-colored squares around a base subset
    Squares {
        /// Canonical base: the zero-class or nonzero-class representative
        #[arg(long, value_enum, default_value = "zero")]
        rep: Rep,
        /// Explicit base subset (hex), overriding --rep
        #[arg(long)]
        subset: Option<String>,
        /// Explicit base subset (elements), overriding --rep
        #[arg(long)]
        elems: Option<String>,
    },
    /// Classify a permutation table: crooked / affine-condition-only / neither
    Crooked {
        /// "gold", "identity", or a path to a whitespace/comma-separated table
        #[arg(long)]
        table: String,
    },
    /// Export parity-check matrices (H, B, and cells at chosen translates)
    Export {
        /// Comma-separated translates alpha for the exported cells
        #[arg(long, default_value = "0")]
        alpha: String,
        /// Parity target for the exported cells: 1 = odd partition cells
        #[arg(long, default_value_t = 1)]
        parity: u8,
    },
    /// Check the exponents s and m - s induce the same partition
    Coincide {
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Mode {
    Sampled,
    Exhaustive,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
pub enum Rep {
    Zero,
    Nonzero,
}

struct CmdOutput {
    human: String,
    /// Machine-readable body: pretty JSON for most commands, CSV for
    /// `table`, matrix text for `export`. Serialized from the report structs
    /// directly so field order follows the struct declarations.
    canonical: String,
    pass: bool,
}

fn json_body<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports serialize");
    s.push('\n');
    s
}

/// Execute a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let started = std::time::Instant::now();
    let outcome = dispatch(&cli);
    let code = match outcome {
        Ok(output) => {
            if cli.json {
                print!("{}", output.canonical);
            } else {
                print!("{}", output.human);
            }
            if let Some(path) = &cli.out {
                if let Err(e) = fs::write(path, output.canonical.as_bytes()) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            }
            if output.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Budget(_) => 3,
                _ => 2,
            }
        }
    };
    eprintln!("runtime_ms {}", started.elapsed().as_millis());
    code
}

fn dispatch(cli: &Cli) -> Result<CmdOutput> {
    match &cli.cmd {
        Cmd::Verify { mode, samples } => cmd_verify(cli, *mode, *samples),
        Cmd::Table => cmd_table(cli),
        Cmd::Color { subset, elems } => cmd_color(cli, subset, elems),
        Cmd::Orbit { subset, elems } => cmd_orbit(cli, subset, elems),
        Cmd::Squares { rep, subset, elems } => cmd_squares(cli, *rep, subset, elems),
        Cmd::Crooked { table } => cmd_crooked(cli, table),
        Cmd::Export { alpha, parity } => cmd_export(cli, alpha, *parity),
        Cmd::Coincide { samples } => cmd_coincide(cli, *samples),
    }
}

fn require_m(cli: &Cli) -> Result<usize> {
    cli.m.ok_or_else(|| Error::Parse("--m is required for this command".into()))
}

fn parse_modulus(cli: &Cli, m: usize) -> Result<Option<Modulus>> {
    match &cli.modulus {
        None => Ok(None),
        Some(text) => {
            let digits = text.strip_prefix("0x").or_else(|| text.strip_prefix("0X")).unwrap_or(text);
            let poly = u32::from_str_radix(digits, 16)
                .map_err(|_| Error::Parse(format!("bad modulus {text:?}: expected hex")))?;
            Ok(Some(Modulus::new(m, poly)?))
        }
    }
}

fn make_params(cli: &Cli) -> Result<GoldParams> {
    let m = require_m(cli)?;
    GoldParams::new(m, cli.s, parse_modulus(cli, m)?)
}

fn default_samples(m: usize, requested: Option<usize>) -> usize {
    requested.unwrap_or(if m <= 9 { 1000 } else { 200 })
}

/// Resolve `--subset`/`--elems` into a subset of the 2^m-cube.
fn parse_subset_arg(n: usize, subset: &Option<String>, elems: &Option<String>) -> Result<SubsetVec> {
    match (subset, elems) {
        (Some(_), Some(_)) => {
            Err(Error::Parse("give either --subset or --elems, not both".into()))
        }
        (None, None) => Err(Error::Parse("a subset is required: --subset HEX or --elems LIST".into())),
        (Some(hex), None) => SubsetVec::from_hex(n, hex.trim()),
        (None, Some(list)) => {
            let mut values = Vec::new();
            for tok in list.split(',') {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                let v: FieldElement = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad element {tok:?}")))?;
                values.push(v);
            }
            let x = SubsetVec::from_elements(n, &values)?;
            if x.cardinality() != values.len() {
                return Err(Error::Parse("duplicate elements in --elems".into()));
            }
            Ok(x)
        }
    }
}

fn render_checks(checks: &[CheckReport]) -> String {
    let mut out = String::new();
    for c in checks {
        if c.pass() {
            out.push_str(&format!("ok   {} ({} samples)\n", c.name, c.samples));
        } else {
            out.push_str(&format!("FAIL {}: {}\n", c.name, c.failures[0]));
        }
    }
    out
}

#[derive(Serialize)]
struct VerifyReport {
    command: &'static str,
    version: &'static str,
    params: ParamsEcho,
    seed: u64,
    mode: String,
    samples: usize,
    cell_log2_size: usize,
    checks: Vec<CheckReport>,
    pass: bool,
}

fn cmd_verify(cli: &Cli, mode: Mode, samples: Option<usize>) -> Result<CmdOutput> {
    let gp = make_params(cli)?;
    let samples = default_samples(gp.m(), samples);
    let vmode = match mode {
        Mode::Exhaustive => VerifyMode::Exhaustive,
        Mode::Sampled => VerifyMode::Sampled(samples),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);

    let partition = verify_partition(&gp, vmode, &mut rng)?;
    let mut checks = partition.checks.clone();
    checks.extend(check_theorem_pairs(&gp, 50, &mut rng));
    checks.extend(check_lemmas(&gp, samples, &mut rng));
    checks.push(coincidence_check(&gp, samples, &mut rng)?);

    let pass = checks.iter().all(CheckReport::pass);
    let report = VerifyReport {
        command: "verify",
        version: VERSION,
        params: gp.echo(),
        seed: cli.seed,
        mode: partition.mode.clone(),
        samples: partition.samples,
        cell_log2_size: partition.cell_log2_size,
        checks,
        pass,
    };

    let mut human = format!(
        "verify m={} s={} modulus={} mode={} seed={}\n",
        gp.m(),
        gp.s(),
        report.params.modulus_hex,
        report.mode,
        cli.seed
    );
    human.push_str(&render_checks(&report.checks));
    human.push_str(if pass { "PASS\n" } else { "FAIL\n" });
    if !pass {
        let first = report.checks.iter().find(|c| !c.pass()).unwrap();
        eprintln!("first failing check: {}", first.name);
    }
    Ok(CmdOutput {
        human,
        canonical: json_body(&report),
        pass,
    })
}

fn cmd_table(cli: &Cli) -> Result<CmdOutput> {
    let m = require_m(cli)?;
    if m > 11 || (m == 11 && !cli.long) {
        return Err(Error::Budget(format!(
            "square-count table at m = {m} {}",
            if m == 11 { "requires --long" } else { "is out of range (max 11)" }
        )));
    }
    let modulus = parse_modulus(cli, m)?;
    let mut csv = String::from("n,sigma_plus_1,Q_zero_class,Q_nonzero_class\n");
    for s in valid_exponents(m).into_iter().filter(|&s| s <= (m - 1) / 2) {
        let gp = GoldParams::new(m, s, modulus)?;
        let (x0, x1) = canonical_reps(&gp);
        let q0 = count_two_color_squares(&x0, &gp, cli.threads, cli.long)?;
        let q1 = count_two_color_squares(&x1, &gp, cli.threads, cli.long)?;
        csv.push_str(&format!("{},{},{q0},{q1}\n", gp.field_size(), gp.sigma_plus_1()));
    }
    Ok(CmdOutput { human: csv.clone(), canonical: csv, pass: true })
}

#[derive(Serialize)]
struct ColorReport {
    command: &'static str,
    version: &'static str,
    params: ParamsEcho,
    subset_hex: String,
    elements: Vec<FieldElement>,
    cardinality: usize,
    color: FieldElement,
    color_hex: String,
    s_class: SClass,
    in_color_cell: bool,
}

fn cmd_color(cli: &Cli, subset: &Option<String>, elems: &Option<String>) -> Result<CmdOutput> {
    let gp = make_params(cli)?;
    let x = parse_subset_arg(gp.field_size(), subset, elems)?;
    let color = gp.color(&x)?;
    let class = s_class(&x, &gp)?;
    let in_cell = build_h_alpha_p(color, true, &gp).contains(&x);
    let report = ColorReport {
        command: "color",
        version: VERSION,
        params: gp.echo(),
        subset_hex: x.to_hex(),
        elements: x.elements(),
        cardinality: x.cardinality(),
        color,
        color_hex: format!("{color:#x}"),
        s_class: class,
        in_color_cell: in_cell,
    };
    let human = format!(
        "subset {:?}\ncolor = {} ({}), class = {:?}, cell membership {}\n",
        x,
        color,
        report.color_hex,
        class,
        if in_cell { "confirmed" } else { "FAILED" }
    );
    Ok(CmdOutput {
        human,
        canonical: json_body(&report),
        pass: in_cell,
    })
}

#[derive(Serialize)]
struct OrbitReport {
    command: &'static str,
    version: &'static str,
    params: ParamsEcho,
    subset_hex: String,
    elements: Vec<FieldElement>,
    color: FieldElement,
    s_class: SClass,
    canonical_rep_hex: String,
    canonical_rep_elements: Vec<FieldElement>,
}

fn cmd_orbit(cli: &Cli, subset: &Option<String>, elems: &Option<String>) -> Result<CmdOutput> {
    let gp = make_params(cli)?;
    let x = parse_subset_arg(gp.field_size(), subset, elems)?;
    let class = s_class(&x, &gp)?;
    let color = gp.color(&x)?;
    let (x0, x1) = canonical_reps(&gp);
    let rep = match class {
        SClass::Zero => x0,
        SClass::NonZero => x1,
    };
    let report = OrbitReport {
        command: "orbit",
        version: VERSION,
        params: gp.echo(),
        subset_hex: x.to_hex(),
        elements: x.elements(),
        color,
        s_class: class,
        canonical_rep_hex: rep.to_hex(),
        canonical_rep_elements: rep.elements(),
    };
    let human = format!(
        "subset {x:?}\nclass = {class:?}, color = {color}, canonical representative {rep:?}\n"
    );
    Ok(CmdOutput {
        human,
        canonical: json_body(&report),
        pass: true,
    })
}

#[derive(Serialize)]
struct SquaresReport {
    command: &'static str,
    version: &'static str,
    params: ParamsEcho,
    base_hex: String,
    base_elements: Vec<FieldElement>,
    base_class: SClass,
    q: u64,
}

fn cmd_squares(cli: &Cli, rep: Rep, subset: &Option<String>, elems: &Option<String>) -> Result<CmdOutput> {
    let gp = make_params(cli)?;
    let base = if subset.is_some() || elems.is_some() {
        parse_subset_arg(gp.field_size(), subset, elems)?
    } else {
        let (x0, x1) = canonical_reps(&gp);
        match rep {
            Rep::Zero => x0,
            Rep::Nonzero => x1,
        }
    };
    let class = s_class(&base, &gp)?;
    let q = count_two_color_squares(&base, &gp, cli.threads, cli.long)?;
    let report = SquaresReport {
        command: "squares",
        version: VERSION,
        params: gp.echo(),
        base_hex: base.to_hex(),
        base_elements: base.elements(),
        base_class: class,
        q,
    };
    let human = format!("base {base:?} (class {class:?})\nQ = {q}\n");
    Ok(CmdOutput {
        human,
        canonical: json_body(&report),
        pass: true,
    })
}

#[derive(Serialize)]
struct CrookedCmdReport {
    command: &'static str,
    version: &'static str,
    m: usize,
    source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    params: Option<ParamsEcho>,
    report: CrookedReport,
}

fn cmd_crooked(cli: &Cli, table: &str) -> Result<CmdOutput> {
    let (perm, params) = match table {
        "gold" => {
            let gp = make_params(cli)?;
            (PermTable::gold(&gp), Some(gp.echo()))
        }
        "identity" => (PermTable::identity(require_m(cli)?)?, None),
        path => {
            let text = fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read table {path:?}: {e}")))?;
            let perm = PermTable::from_text(&text)?;
            if let Some(m) = cli.m {
                if m != perm.m() {
                    return Err(Error::Parse(format!(
                        "table length {} implies m = {}, but --m {m} was given",
                        perm.len(),
                        perm.m()
                    )));
                }
            }
            (perm, None)
        }
    };
    let m = perm.m();
    let result = check_crooked(&perm)?;
    let human = format!(
        "table {} (m = {m}): crooked = {}, affine condition = {}{}\n",
        table,
        result.crooked,
        result.affine_condition,
        match &result.witness {
            Some(w) => format!(
                "\nfirst violation: direction {} (difference set size {}, affine {})",
                w.alpha, w.size, w.affine
            ),
            None => String::new(),
        }
    );
    let report = CrookedCmdReport {
        command: "crooked",
        version: VERSION,
        m,
        source: table.to_string(),
        params,
        report: result,
    };
    Ok(CmdOutput {
        human,
        canonical: json_body(&report),
        pass: true,
    })
}

/// One-line JSON header preceding each exported matrix.
#[derive(Serialize)]
struct MatrixHeader<'a> {
    label: &'a str,
    m: usize,
    s: usize,
    modulus: &'a str,
    rows: usize,
    cols: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    alpha: Option<FieldElement>,
    #[serde(skip_serializing_if = "Option::is_none")]
    parity: Option<u8>,
}

fn render_matrix(spec: &AffineCodeSpec, header: &MatrixHeader<'_>) -> String {
    let line = serde_json::to_string(header).expect("headers serialize");
    format!("{line}\n{}", spec.render_rows())
}

fn cmd_export(cli: &Cli, alpha_list: &str, parity: u8) -> Result<CmdOutput> {
    if parity > 1 {
        return Err(Error::Parse(format!("--parity must be 0 or 1, got {parity}")));
    }
    let gp = make_params(cli)?;
    let n = gp.field_size();
    let mut alphas = Vec::new();
    for tok in alpha_list.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let a: FieldElement = tok
            .parse()
            .map_err(|_| Error::Parse(format!("bad translate {tok:?}")))?;
        if a as usize >= n {
            return Err(Error::Element { len: n, value: a });
        }
        alphas.push(a);
    }
    if alphas.is_empty() {
        return Err(Error::Parse("--alpha needs at least one translate".into()));
    }
    let echo = gp.echo();
    let base = |label: &'static str, rows: usize| MatrixHeader {
        label,
        m: echo.m,
        s: echo.s,
        modulus: &echo.modulus_hex,
        rows,
        cols: n,
        alpha: None,
        parity: None,
    };
    let mut text = String::new();
    let h = build_h(&gp);
    text.push_str(&render_matrix(&h, &base("H", h.rows().len())));
    text.push('\n');
    let b = build_b(&gp);
    text.push_str(&render_matrix(&b, &base("B", b.rows().len())));
    for &a in &alphas {
        text.push('\n');
        let cell = build_h_alpha_p(a, parity == 1, &gp);
        let mut header = base("cell", cell.rows().len());
        header.alpha = Some(a);
        header.parity = Some(parity);
        text.push_str(&render_matrix(&cell, &header));
    }
    Ok(CmdOutput { human: text.clone(), canonical: text, pass: true })
}

#[derive(Serialize)]
struct CoincideReport {
    command: &'static str,
    version: &'static str,
    params: ParamsEcho,
    mirror_s: usize,
    check: CheckReport,
    pass: bool,
}

fn cmd_coincide(cli: &Cli, samples: Option<usize>) -> Result<CmdOutput> {
    let gp = make_params(cli)?;
    let samples = default_samples(gp.m(), samples);
    let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
    let check = coincidence_check(&gp, samples, &mut rng)?;
    let pass = check.pass();
    let report = CoincideReport {
        command: "coincide",
        version: VERSION,
        params: gp.echo(),
        mirror_s: gp.m() - gp.s(),
        check,
        pass,
    };
    let mut human = format!(
        "exponents s = {} and s = {} over m = {}\n",
        gp.s(),
        report.mirror_s,
        gp.m()
    );
    human.push_str(&render_checks(std::slice::from_ref(&report.check)));
    human.push_str(if pass { "PASS\n" } else { "FAIL\n" });
    Ok(CmdOutput {
        human,
        canonical: json_body(&report),
        pass,
    })
}
