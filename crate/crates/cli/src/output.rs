use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "ORLICZ_LAB_OUT_DIR";

/// 12 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.11e}")
}

/// CSV rows go to `<dir>/<name>.csv` when a directory is configured, and to
/// stdout otherwise.
pub struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    pub fn new(flag: Option<PathBuf>) -> Self {
        let dir = flag.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from));
        Self { dir }
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    pub fn write_csv(&self, name: &str, header: &str, rows: &[String]) -> io::Result<()> {
        let mut out: Box<dyn Write> = match &self.dir {
            Some(dir) => {
                fs::create_dir_all(dir)?;
                Box::new(BufWriter::new(File::create(dir.join(format!("{name}.csv")))?))
            }
            None => Box::new(io::stdout().lock()),
        };
        writeln!(out, "{header}")?;
        for r in rows {
            writeln!(out, "{r}")?;
        }
        out.flush()
    }
}
