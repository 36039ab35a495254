//! `lsbstego` command-line front end.
//!
//! Every subcommand prints `key: value` lines on success. Failures map to
//! fixed exit codes, see [`ExitCode`].

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use lsbstego_core::{
    capacity, decode, embed_image, encode, extract_image, merge_plane, psnr, split_plane,
    usable_capacity, Backend, Channel, Error, Image, ImagePlane, HEADER_LEN,
};

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitCode {
    Ok = 0,
    Usage = 1,
    Capacity = 2,
    Decode = 3,
    Io = 4,
    NotStego = 5,
    Shape = 6,
}

#[derive(Debug, Parser)]
#[command(name = "lsbstego", version, about = "Hide bytes in the two low bits of PGM/PPM pixels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed a payload file into a cover image.
    Embed {
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        payload: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Recover the payload from a stego image.
    Extract {
        #[arg(long)]
        stego: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        exec: ExecArgs,
    },
    /// Report how many bytes a cover image can carry.
    Capacity {
        #[arg(long)]
        cover: PathBuf,
    },
    /// Compare two images.
    Psnr {
        #[arg(long = "ref")]
        reference: PathBuf,
        #[arg(long)]
        test: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct ExecArgs {
    /// Color plane to use: r, g or b (RGB images only; default r).
    #[arg(long)]
    pub plane: Option<Channel>,
    /// Execution backend: seq, par or shuf. Defaults to $LSBSTEGO_BACKEND, then par.
    #[arg(long)]
    pub backend: Option<Backend>,
    /// Seed for the shuffled backend.
    #[arg(long)]
    pub seed: Option<u64>,
}

impl ExecArgs {
    fn backend(&self) -> Backend {
        let backend = self.backend.or_else(Backend::from_env).unwrap_or_default();
        match (backend, self.seed) {
            (Backend::Shuffled { .. }, Some(seed)) => Backend::Shuffled { seed },
            (backend, _) => backend,
        }
    }
}

#[derive(Debug)]
pub struct Failure {
    pub code: ExitCode,
    pub message: String,
}

impl Failure {
    fn new(code: ExitCode, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Capacity { .. } | Error::PayloadTooLarge(_) => ExitCode::Capacity,
            Error::UnsupportedFormat | Error::UnsupportedDepth(_) | Error::CorruptFile(_) => ExitCode::Decode,
            Error::NotStego { .. } | Error::CorruptHeader { .. } => ExitCode::NotStego,
            Error::ShapeMismatch { .. } => ExitCode::Shape,
            Error::InvalidBlock(_) | Error::Launch(_) => ExitCode::Usage,
        };
        Failure::new(code, err.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn read_file(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| Failure::new(ExitCode::Io, format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> CmdResult {
    fs::write(path, bytes).map_err(|e| Failure::new(ExitCode::Io, format!("cannot write {}: {e}", path.display())))
}

fn read_image(path: &Path) -> Result<Image, Failure> {
    let bytes = read_file(path)?;
    decode(&bytes).map_err(|e| Failure::new(ExitCode::Decode, format!("{}: {e}", path.display())))
}

fn select_plane(image: &Image, plane: Option<Channel>) -> Result<(ImagePlane, Channel), Failure> {
    match image {
        Image::Gray(p) => match plane {
            None | Some(Channel::Red) => Ok((p.clone(), Channel::Red)),
            Some(c) => Err(Failure::new(
                ExitCode::Usage,
                format!("--plane {c} given for a grayscale image, which has a single plane"),
            )),
        },
        Image::Rgb(img) => {
            let c = plane.unwrap_or_default();
            Ok((split_plane(img, c), c))
        }
    }
}

fn plane_name(image: &Image, channel: Channel) -> String {
    match image {
        Image::Gray(_) => "gray".to_string(),
        Image::Rgb(_) => channel.to_string(),
    }
}

fn out_err(e: std::io::Error) -> Failure {
    Failure::new(ExitCode::Io, format!("cannot write to stdout: {e}"))
}

fn cmd_embed(cover: &Path, payload: &Path, out: &Path, exec: &ExecArgs, stdout: &mut dyn Write) -> CmdResult {
    let image = read_image(cover)?;
    let payload = read_file(payload)?;
    let (plane, channel) = select_plane(&image, exec.plane)?;
    let backend = exec.backend();

    let total = capacity(plane.width(), plane.height());
    let stego_plane = embed_image(&plane, &payload, backend).map_err(|e| match e {
        Error::Capacity { .. } => Failure::new(
            ExitCode::Capacity,
            format!(
                "payload does not fit: {} bytes needed ({HEADER_LEN}-byte header + {} payload), {} bytes available",
                HEADER_LEN + payload.len(),
                payload.len(),
                total
            ),
        ),
        other => other.into(),
    })?;
    let plane_report = psnr(&plane, &stego_plane)?;
    let stego = match &image {
        Image::Gray(_) => Image::Gray(stego_plane),
        Image::Rgb(img) => Image::Rgb(merge_plane(img, channel, stego_plane)?),
    };
    let report = psnr(&image, &stego)?;
    write_file(out, &encode(&stego))?;

    let stream = HEADER_LEN + payload.len();
    (|| {
        writeln!(stdout, "plane: {}", plane_name(&image, channel))?;
        writeln!(stdout, "backend: {backend}")?;
        writeln!(stdout, "embedded_bytes: {}", payload.len())?;
        writeln!(stdout, "stream_bytes: {stream}")?;
        writeln!(stdout, "capacity_total: {total}")?;
        writeln!(stdout, "capacity_used: {stream}/{total}")?;
        writeln!(stdout, "capacity_used_pct: {:.4}", 100.0 * stream as f64 / total as f64)?;
        writeln!(stdout, "mse: {:.6}", report.mse)?;
        writeln!(stdout, "psnr_db: {}", report.psnr)?;
        writeln!(stdout, "psnr_plane_db: {}", plane_report.psnr)
    })()
    .map_err(out_err)
}

fn cmd_extract(stego: &Path, out: &Path, exec: &ExecArgs, stdout: &mut dyn Write) -> CmdResult {
    let image = read_image(stego)?;
    let (plane, channel) = select_plane(&image, exec.plane)?;
    let payload = extract_image(&plane, exec.backend()).map_err(|e| match e {
        Error::NotStego { .. } => Failure::new(
            ExitCode::NotStego,
            format!("not a stego image: no header in the {} plane", plane_name(&image, channel)),
        ),
        other => other.into(),
    })?;
    write_file(out, &payload)?;
    writeln!(stdout, "extracted_bytes: {}", payload.len()).map_err(out_err)
}

fn cmd_capacity(cover: &Path, stdout: &mut dyn Write) -> CmdResult {
    let image = read_image(cover)?;
    let (w, h) = (image.width(), image.height());
    (|| {
        writeln!(stdout, "width: {w}")?;
        writeln!(stdout, "height: {h}")?;
        writeln!(stdout, "capacity_total: {}", capacity(w, h))?;
        writeln!(stdout, "capacity_usable: {}", usable_capacity(w, h))
    })()
    .map_err(out_err)
}

fn cmd_psnr(reference: &Path, test: &Path, stdout: &mut dyn Write) -> CmdResult {
    let reference = read_image(reference)?;
    let test = read_image(test)?;
    let report = psnr(&reference, &test)?;
    (|| {
        writeln!(stdout, "samples: {}", report.samples_compared)?;
        writeln!(stdout, "mse: {:.6}", report.mse)?;
        writeln!(stdout, "psnr_db: {}", report.psnr)
    })()
    .map_err(out_err)
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Embed {
            cover,
            payload,
            out,
            exec,
        } => cmd_embed(cover, payload, out, exec, stdout),
        Command::Extract { stego, out, exec } => cmd_extract(stego, out, exec, stdout),
        Command::Capacity { cover } => cmd_capacity(cover, stdout),
        Command::Psnr { reference, test } => cmd_psnr(reference, test, stdout),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                return ExitCode::Usage as u8;
            }
            let _ = write!(stdout, "{}", e.render());
            return ExitCode::Ok as u8;
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => ExitCode::Ok as u8,
        Err(failure) => {
            let _ = writeln!(stderr, "error: {}", failure.message);
            failure.code as u8
        }
    }
}
