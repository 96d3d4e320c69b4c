use std::fs;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use pbwt::file::IndexFile;
use pbwt::pdict::{PDictIndex, Scanner};
use pbwt::pindex::{BuildOptions, PIndex, SampleRate};
use pbwt::sindex::SIndex;
use pbwt::{AlphabetSpec, Mode};

#[derive(Parser)]
#[command(name = "pbwt", version, about = "Parameterized and structural pattern matching over a compressed index")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a parameterized index (optionally with the structural one).
    Build {
        text: PathBuf,
        alphabet: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Suffix-array sampling distance (default: ceil(log2 n)).
        #[arg(long)]
        delta: Option<usize>,
        /// Also build the structural index.
        #[arg(long)]
        structural: bool,
    },
    /// Count the p-matches of a pattern.
    Count { index: PathBuf, pattern: String },
    /// Print the start positions of the p-matches of a pattern.
    Locate { index: PathBuf, pattern: String },
    /// Print prev(T[x..y]).
    Extract { index: PathBuf, x: usize, y: usize },
    /// Build a structural index only.
    Sbuild {
        text: PathBuf,
        alphabet: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long)]
        delta: Option<usize>,
    },
    /// Structural matches of a pattern: positions, or the number with --count.
    Squery {
        index: PathBuf,
        pattern: String,
        #[arg(long)]
        count: bool,
    },
    /// Build a dictionary automaton from a file with one pattern per line.
    DictBuild {
        patterns: PathBuf,
        alphabet: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Stream a text (file or standard input) and print `end<TAB>pattern` lines.
    DictScan { dict: PathBuf, text: Option<PathBuf> },
    /// Print `key=value` statistics of an index file.
    Stats { index: PathBuf },
}

enum Fail {
    Input(String),
    Io(String),
}

impl From<pbwt::Error> for Fail {
    fn from(e: pbwt::Error) -> Self {
        Fail::Input(e.to_string())
    }
}

type Res<T> = Result<T, Fail>;

fn io_err(path: &Path, e: io::Error) -> Fail {
    Fail::Io(format!("{}: {e}", path.display()))
}

fn read_string(path: &Path) -> Res<String> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    String::from_utf8(bytes).map_err(|_| Fail::Input(format!("{}: not valid UTF-8", path.display())))
}

fn read_alphabet(path: &Path) -> Res<AlphabetSpec> {
    Ok(AlphabetSpec::parse(&read_string(path)?)?)
}

fn load(path: &Path) -> Res<IndexFile> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    Ok(IndexFile::from_bytes(&bytes)?)
}

fn save(path: &Path, f: &IndexFile) -> Res<()> {
    fs::write(path, f.to_bytes()).map_err(|e| io_err(path, e))
}

fn options(delta: Option<usize>) -> Res<BuildOptions> {
    let sample_rate = match delta {
        Some(0) => return Err(Fail::Input("--delta must be positive".into())),
        Some(d) => SampleRate::Fixed(d),
        None => SampleRate::LogN,
    };
    Ok(BuildOptions { sample_rate, ..BuildOptions::default() })
}

fn print_stats(f: &IndexFile, out: &mut impl Write) -> io::Result<()> {
    for (k, v) in f.stats() {
        writeln!(out, "{k}={v}")?;
    }
    Ok(())
}

fn pindex(f: &IndexFile) -> Res<&PIndex> {
    f.pindex.as_ref().ok_or_else(|| Fail::Input("index has no parameterized component".into()))
}

fn sindex(f: &IndexFile) -> Res<&SIndex> {
    f.sindex.as_ref().ok_or_else(|| Fail::Input(pbwt::Error::NoStructuralIndex.to_string()))
}

fn run(cmd: Cmd, out: &mut impl Write) -> Res<()> {
    let stdout_err = |e: io::Error| Fail::Io(format!("stdout: {e}"));
    match cmd {
        Cmd::Build { text, alphabet, out: dest, delta, structural } => {
            let spec = read_alphabet(&alphabet)?;
            let t = spec.encode_text(&read_string(&text)?, Mode::Index)?;
            let o = options(delta)?;
            let mut f = IndexFile::new(spec.clone());
            f.pindex = Some(PIndex::build(&t, &spec, &o)?);
            if structural {
                f.sindex = Some(SIndex::build(&t, &spec, &o)?);
            }
            save(&dest, &f)?;
            print_stats(&f, out).map_err(stdout_err)?;
        }
        Cmd::Sbuild { text, alphabet, out: dest, delta } => {
            let spec = read_alphabet(&alphabet)?;
            let t = spec.encode_text(&read_string(&text)?, Mode::Index)?;
            let mut f = IndexFile::new(spec.clone());
            f.sindex = Some(SIndex::build(&t, &spec, &options(delta)?)?);
            save(&dest, &f)?;
            print_stats(&f, out).map_err(stdout_err)?;
        }
        Cmd::Count { index, pattern } => {
            let f = load(&index)?;
            let p = f.spec.encode_text(&pattern, Mode::Query)?;
            writeln!(out, "{}", pindex(&f)?.count(&p)?).map_err(stdout_err)?;
        }
        Cmd::Locate { index, pattern } => {
            let f = load(&index)?;
            let p = f.spec.encode_text(&pattern, Mode::Query)?;
            for pos in pindex(&f)?.locate(&p)? {
                writeln!(out, "{pos}").map_err(stdout_err)?;
            }
        }
        Cmd::Extract { index, x, y } => {
            let f = load(&index)?;
            let e = pindex(&f)?.extract(x, y)?;
            writeln!(out, "{}", f.spec.render(&e)).map_err(stdout_err)?;
        }
        Cmd::Squery { index, pattern, count } => {
            let f = load(&index)?;
            let s = sindex(&f)?;
            let p = f.spec.encode_text(&pattern, Mode::Query)?;
            if count {
                writeln!(out, "{}", s.s_count(&p)?).map_err(stdout_err)?;
            } else {
                for pos in s.s_locate(&p)? {
                    writeln!(out, "{pos}").map_err(stdout_err)?;
                }
            }
        }
        Cmd::DictBuild { patterns, alphabet, out: dest } => {
            let spec = read_alphabet(&alphabet)?;
            let pats = read_string(&patterns)?
                .lines()
                .filter(|l| !l.trim().is_empty())
                .map(|l| spec.encode_text(l, Mode::Query))
                .collect::<pbwt::Result<Vec<_>>>()?;
            let mut f = IndexFile::new(spec.clone());
            f.dict = Some(PDictIndex::build(&pats, &spec)?);
            save(&dest, &f)?;
            print_stats(&f, out).map_err(stdout_err)?;
        }
        Cmd::DictScan { dict, text } => {
            let f = load(&dict)?;
            let d = f.dict.as_ref().ok_or_else(|| Fail::Input("index has no dictionary".into()))?;
            let input: Box<dyn BufRead> = match &text {
                Some(path) => Box::new(io::BufReader::new(fs::File::open(path).map_err(|e| io_err(path, e))?)),
                None => Box::new(io::stdin().lock()),
            };
            let name = text.as_deref().unwrap_or(Path::new("stdin"));
            let mut sc = Scanner::new(d);
            let mut hits = Vec::new();
            let mut pos = 0;
            for line in input.lines() {
                let line = line.map_err(|e| io_err(name, e))?;
                for ch in line.chars().filter(|c| !c.is_whitespace()) {
                    pos += 1;
                    let c = f.spec.code(ch).ok_or(pbwt::Error::UnknownSymbol(pos))?;
                    hits.clear();
                    sc.push(c, &mut hits)?;
                    for (end, id) in &hits {
                        writeln!(out, "{end}\t{id}").map_err(stdout_err)?;
                    }
                }
            }
        }
        Cmd::Stats { index } => {
            let f = load(&index)?;
            print_stats(&f, out).map_err(stdout_err)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let res = run(cli.cmd, &mut out);
    let flushed = out.flush();
    match (res, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Err(Fail::Input(m)), _) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        (Err(Fail::Io(m)), _) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
        (Ok(()), Err(e)) => {
            eprintln!("error: stdout: {e}");
            ExitCode::from(3)
        }
    }
}
