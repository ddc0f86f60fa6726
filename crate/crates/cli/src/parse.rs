//! Puzzle file parser.
//!
//! The format is line oriented. `key:` lines open a section; `type`, `rows`,
//! `cols`, `toroidal`, `lambda`, `diag`, `counts-rows` and `counts-cols` take
//! their value on the same line, while `grid` is followed by exactly `rows`
//! raw lines and `initial`, `symbols` and `regions` collect lines until the
//! next key. Outside the grid block, `#` starts a comment.

use std::collections::BTreeSet;
use std::fmt;

use quboku::board::{Board, CellRef, DiagReach, Region};
use quboku::pieces::{MovePattern, PiecesProblem};
use quboku::queens::QueensProblem;
use quboku::takuzu::{Symbol, SymbolKind, TakuzuProblem};
use quboku::tents::TentsTreesProblem;
use quboku::Puzzle;

#[derive(Debug)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

type Line = (usize, String);

#[derive(Default)]
struct RawFile {
    typ: Option<Line>,
    rows: Option<Line>,
    cols: Option<Line>,
    grid: Vec<(usize, Vec<String>)>,
    initial: Vec<Line>,
    symbols: Vec<Line>,
    regions: Vec<Line>,
    counts_rows: Option<Line>,
    counts_cols: Option<Line>,
    toroidal: Option<Line>,
    lambda: Option<Line>,
    diag: Option<Line>,
}

fn split_section(line: &str) -> Option<(&str, &str)> {
    let idx = line.find(':')?;
    let key = &line[..idx];
    if key.is_empty()
        || !key
            .chars()
            .all(|c| c.is_ascii_lowercase() || c == '-')
    {
        return None;
    }
    Some((key, line[idx + 1..].trim()))
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn collect_sections(text: &str) -> Result<RawFile, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut raw = RawFile::default();
    let mut block: Option<&'static str> = None;
    let mut i = 0;
    while i < lines.len() {
        let line_no = i + 1;
        let content = strip_comment(lines[i]).trim().to_string();
        i += 1;
        if content.is_empty() {
            continue;
        }
        if let Some((key, value)) = split_section(&content) {
            let set_single = |slot: &mut Option<Line>, what: &str| -> Result<(), ParseError> {
                if slot.is_some() {
                    return Err(ParseError::new(line_no, format!("duplicate `{what}:`")));
                }
                *slot = Some((line_no, value.to_string()));
                Ok(())
            };
            match key {
                "type" => set_single(&mut raw.typ, "type")?,
                "rows" => set_single(&mut raw.rows, "rows")?,
                "cols" => set_single(&mut raw.cols, "cols")?,
                "counts-rows" => set_single(&mut raw.counts_rows, "counts-rows")?,
                "counts-cols" => set_single(&mut raw.counts_cols, "counts-cols")?,
                "toroidal" => set_single(&mut raw.toroidal, "toroidal")?,
                "lambda" => set_single(&mut raw.lambda, "lambda")?,
                "diag" => set_single(&mut raw.diag, "diag")?,
                "initial" => block = Some("initial"),
                "symbols" => block = Some("symbols"),
                "regions" => block = Some("regions"),
                "grid" => {
                    if !raw.grid.is_empty() {
                        return Err(ParseError::new(line_no, "duplicate `grid:`"));
                    }
                    let n = parse_usize(raw.rows.as_ref(), "rows", line_no)?;
                    for k in 0..n {
                        let gl = i + k;
                        if gl >= lines.len() {
                            return Err(ParseError::new(
                                lines.len(),
                                format!("grid needs {n} rows, found {k}"),
                            ));
                        }
                        let tokens: Vec<String> =
                            lines[gl].split_whitespace().map(str::to_string).collect();
                        raw.grid.push((gl + 1, tokens));
                    }
                    i += n;
                    block = None;
                    continue;
                }
                other => {
                    return Err(ParseError::new(line_no, format!("unknown key `{other}:`")));
                }
            }
            if !matches!(key, "initial" | "symbols" | "regions") {
                block = None;
            }
            continue;
        }
        match block {
            Some("initial") => raw.initial.push((line_no, content)),
            Some("symbols") => raw.symbols.push((line_no, content)),
            Some("regions") => raw.regions.push((line_no, content)),
            _ => {
                return Err(ParseError::new(
                    line_no,
                    format!("stray content `{content}` outside any section"),
                ));
            }
        }
    }
    Ok(raw)
}

fn parse_usize(slot: Option<&Line>, what: &str, at: usize) -> Result<usize, ParseError> {
    let (line, value) = slot
        .ok_or_else(|| ParseError::new(at, format!("`{what}:` must appear before the grid")))?;
    value
        .parse::<usize>()
        .map_err(|_| ParseError::new(*line, format!("bad {what} value `{value}`")))
}

fn parse_counts(slot: &Option<Line>, expect: usize, what: &str) -> Result<Option<Vec<u32>>, ParseError> {
    let Some((line, value)) = slot else {
        return Ok(None);
    };
    let counts: Result<Vec<u32>, _> = value.split_whitespace().map(str::parse).collect();
    let counts =
        counts.map_err(|_| ParseError::new(*line, format!("bad integer in {what}")))?;
    if counts.len() != expect {
        return Err(ParseError::new(
            *line,
            format!("{what} needs {expect} values, found {}", counts.len()),
        ));
    }
    Ok(Some(counts))
}

fn parse_cell(tokens: &[&str], line: usize, rows: usize, cols: usize) -> Result<CellRef, ParseError> {
    if tokens.len() != 2 {
        return Err(ParseError::new(line, "expected `<row> <col>`"));
    }
    let r: usize = tokens[0]
        .parse()
        .map_err(|_| ParseError::new(line, format!("bad row `{}`", tokens[0])))?;
    let c: usize = tokens[1]
        .parse()
        .map_err(|_| ParseError::new(line, format!("bad column `{}`", tokens[1])))?;
    if r < 1 || r > rows || c < 1 || c > cols {
        return Err(ParseError::new(
            line,
            format!("cell ({r},{c}) is outside the {rows}x{cols} board"),
        ));
    }
    Ok(CellRef::new(r, c))
}

struct Dims {
    rows: usize,
    cols: usize,
}

fn wrap_flags(raw: &RawFile) -> Result<(bool, bool), ParseError> {
    match &raw.toroidal {
        None => Ok((false, false)),
        Some((line, v)) => match v.as_str() {
            "none" => Ok((false, false)),
            "rows" => Ok((true, false)),
            "cols" => Ok((false, true)),
            "both" => Ok((true, true)),
            other => Err(ParseError::new(
                *line,
                format!("toroidal must be none|rows|cols|both, got `{other}`"),
            )),
        },
    }
}

fn reject(slot: &Option<Line>, what: &str, family: &str) -> Result<(), ParseError> {
    if let Some((line, _)) = slot {
        return Err(ParseError::new(
            *line,
            format!("`{what}:` is not used by {family} puzzles"),
        ));
    }
    Ok(())
}

fn reject_block(block: &[Line], what: &str, family: &str) -> Result<(), ParseError> {
    if let Some((line, _)) = block.first() {
        return Err(ParseError::new(
            *line,
            format!("`{what}:` is not used by {family} puzzles"),
        ));
    }
    Ok(())
}

/// Grid tokens with their positions, validated for shape.
fn grid_tokens<'a>(raw: &'a RawFile, dims: &Dims) -> Result<Vec<(usize, usize, usize, &'a str)>, ParseError> {
    if raw.grid.is_empty() {
        return Err(ParseError::new(0, "missing `grid:` section"));
    }
    let mut out = Vec::new();
    for (i, (line, tokens)) in raw.grid.iter().enumerate() {
        if tokens.len() != dims.cols {
            return Err(ParseError::new(
                *line,
                format!("expected {} tokens, found {}", dims.cols, tokens.len()),
            ));
        }
        for (j, tok) in tokens.iter().enumerate() {
            if tok.chars().count() != 1 {
                return Err(ParseError::new(*line, format!("bad grid token `{tok}`")));
            }
            out.push((i + 1, j + 1, *line, tok.as_str()));
        }
    }
    Ok(out)
}

fn parse_initial_queens(
    raw: &RawFile,
    dims: &Dims,
) -> Result<BTreeSet<CellRef>, ParseError> {
    let mut out = BTreeSet::new();
    for (line, content) in &raw.initial {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens.first() != Some(&"Q") {
            return Err(ParseError::new(*line, "expected `Q <row> <col>`"));
        }
        out.insert(parse_cell(&tokens[1..], *line, dims.rows, dims.cols)?);
    }
    Ok(out)
}

/// Region section entries: `R<id> <q> <t>` headers followed by optional
/// `<row> <col>` member lines. An entry without members takes the grid cells
/// carrying its letter.
struct RegionEntry {
    line: usize,
    id: String,
    q: u32,
    t: bool,
    cells: Vec<CellRef>,
}

fn parse_region_entries(raw: &RawFile, dims: &Dims) -> Result<Vec<RegionEntry>, ParseError> {
    let mut entries: Vec<RegionEntry> = Vec::new();
    for (line, content) in &raw.regions {
        let tokens: Vec<&str> = content.split_whitespace().collect();
        if tokens[0].starts_with('R') && tokens[0].len() > 1 {
            if tokens.len() != 3 {
                return Err(ParseError::new(*line, "expected `R<id> <q> <t>`"));
            }
            let q: u32 = tokens[1]
                .parse()
                .map_err(|_| ParseError::new(*line, format!("bad region count `{}`", tokens[1])))?;
            let t: u8 = tokens[2]
                .parse()
                .map_err(|_| ParseError::new(*line, format!("bad region flag `{}`", tokens[2])))?;
            if t > 1 {
                return Err(ParseError::new(*line, "region flag t must be 0 or 1"));
            }
            entries.push(RegionEntry {
                line: *line,
                id: tokens[0][1..].to_string(),
                q,
                t: t == 1,
                cells: Vec::new(),
            });
        } else {
            let entry = entries.last_mut().ok_or_else(|| {
                ParseError::new(*line, "region cells before any `R<id> <q> <t>` header")
            })?;
            entry
                .cells
                .push(parse_cell(&tokens, *line, dims.rows, dims.cols)?);
        }
    }
    Ok(entries)
}

fn build_regions_from_grid_and_entries(
    letters: &[(String, Vec<CellRef>)],
    entries: Vec<RegionEntry>,
    default_q: Option<u32>,
) -> Result<Vec<Region>, ParseError> {
    let mut regions: Vec<Region> = Vec::new();
    let mut overridden: BTreeSet<String> = BTreeSet::new();
    for entry in &entries {
        let cells: Vec<CellRef> = if entry.cells.is_empty() {
            let found = letters.iter().find(|(l, _)| *l == entry.id);
            match found {
                Some((_, cells)) => cells.clone(),
                None => {
                    return Err(ParseError::new(
                        entry.line,
                        format!("region {} lists no cells and matches no grid letter", entry.id),
                    ));
                }
            }
        } else {
            entry.cells.clone()
        };
        overridden.insert(entry.id.clone());
        let mut region = Region::new(entry.id.clone(), cells, entry.q);
        region.t = entry.t;
        regions.push(region);
    }
    if let Some(q) = default_q {
        for (letter, cells) in letters {
            if !overridden.contains(letter) {
                regions.push(Region::new(letter.clone(), cells.iter().copied(), q));
            }
        }
    }
    regions.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(regions)
}

fn letter_groups(
    tokens: &[(usize, usize, usize, &str)],
) -> Vec<(String, Vec<CellRef>)> {
    let mut map: std::collections::BTreeMap<String, Vec<CellRef>> = Default::default();
    for &(r, c, _, tok) in tokens {
        if tok != "." && tok != "#" {
            map.entry(tok.to_string())
                .or_default()
                .push(CellRef::new(r, c));
        }
    }
    map.into_iter().collect()
}

fn parse_diag(raw: &RawFile, default: DiagReach) -> Result<DiagReach, ParseError> {
    match &raw.diag {
        None => Ok(default),
        Some((line, v)) => match v.as_str() {
            "none" => Ok(DiagReach::None),
            "adjacent" => Ok(DiagReach::Within(1)),
            "full" => Ok(DiagReach::Unbounded),
            other => other
                .parse::<u32>()
                .map(DiagReach::Within)
                .map_err(|_| {
                    ParseError::new(
                        *line,
                        format!("diag must be none|adjacent|full|<distance>, got `{other}`"),
                    )
                }),
        },
    }
}

pub fn parse_puzzle(text: &str) -> Result<Puzzle, ParseError> {
    let raw = collect_sections(text)?;
    let (typ_line, typ) = raw
        .typ
        .clone()
        .ok_or_else(|| ParseError::new(0, "missing `type:`"))?;
    let dims = Dims {
        rows: parse_usize(raw.rows.as_ref(), "rows", typ_line)?,
        cols: parse_usize(raw.cols.as_ref(), "cols", typ_line)?,
    };
    if dims.rows == 0 || dims.cols == 0 {
        return Err(ParseError::new(typ_line, "rows and cols must be positive"));
    }
    let (wrap_rows, wrap_cols) = wrap_flags(&raw)?;
    let tokens = grid_tokens(&raw, &dims)?;

    match typ.as_str() {
        "nqueens" | "lqueens" | "general-queens" => {
            reject(&raw.lambda, "lambda", "queens")?;
            reject_block(&raw.symbols, "symbols", "queens")?;
            let mut board = Board::rect(dims.rows, dims.cols).with_wrap(wrap_rows, wrap_cols);
            for &(r, c, line, tok) in &tokens {
                match tok {
                    "#" => {
                        board
                            .deactivate(CellRef::new(r, c))
                            .map_err(|e| ParseError::new(line, e.to_string()))?;
                    }
                    "." => {}
                    _ if tok.chars().all(|ch| ch.is_ascii_alphanumeric()) => {}
                    _ => return Err(ParseError::new(line, format!("bad grid token `{tok}`"))),
                }
            }
            let letters = letter_groups(&tokens);
            let initial = parse_initial_queens(&raw, &dims)?;

            match typ.as_str() {
                "nqueens" => {
                    reject(&raw.counts_rows, "counts-rows", "nqueens")?;
                    reject(&raw.counts_cols, "counts-cols", "nqueens")?;
                    reject(&raw.diag, "diag", "nqueens")?;
                    reject_block(&raw.regions, "regions", "nqueens")?;
                    if let Some((_, cells)) = letters.first() {
                        return Err(ParseError::new(
                            tokens
                                .iter()
                                .find(|t| CellRef::new(t.0, t.1) == cells[0])
                                .map(|t| t.2)
                                .unwrap_or(0),
                            "nqueens grids use only `.` and `#`",
                        ));
                    }
                    let mut p = QueensProblem::nqueens(dims.rows.max(dims.cols));
                    p.board = board;
                    p.row_targets = Some(vec![1; dims.rows]);
                    p.col_targets = Some(vec![1; dims.cols]);
                    p.initial = initial;
                    p = p.with_uniform_diag(DiagReach::Unbounded);
                    Ok(Puzzle::NQueens(p))
                }
                "lqueens" => {
                    reject(&raw.counts_rows, "counts-rows", "lqueens")?;
                    reject(&raw.counts_cols, "counts-cols", "lqueens")?;
                    reject(&raw.diag, "diag", "lqueens")?;
                    reject_block(&raw.regions, "regions", "lqueens")?;
                    let regions =
                        build_regions_from_grid_and_entries(&letters, Vec::new(), Some(1))?;
                    let mut p = QueensProblem::lqueens(board, regions);
                    p.initial = initial;
                    Ok(Puzzle::LQueens(p))
                }
                _ => {
                    let entries = parse_region_entries(&raw, &dims)?;
                    let regions = build_regions_from_grid_and_entries(&letters, entries, Some(1))?;
                    let reach = parse_diag(&raw, DiagReach::None)?;
                    let mut p = QueensProblem::general(board).with_uniform_diag(reach);
                    p.regions = regions;
                    p.initial = initial;
                    p.row_targets = parse_counts(&raw.counts_rows, dims.rows, "counts-rows")?;
                    p.col_targets = parse_counts(&raw.counts_cols, dims.cols, "counts-cols")?;
                    Ok(Puzzle::GeneralQueens(p))
                }
            }
        }
        "tents" => {
            reject(&raw.lambda, "lambda", "tents")?;
            reject(&raw.diag, "diag", "tents")?;
            reject(&raw.toroidal, "toroidal", "tents")?;
            reject_block(&raw.symbols, "symbols", "tents")?;
            reject_block(&raw.regions, "regions", "tents")?;
            reject_block(&raw.initial, "initial", "tents")?;
            if dims.rows != dims.cols {
                return Err(ParseError::new(typ_line, "tents boards are square"));
            }
            let mut trees = Vec::new();
            for &(r, c, line, tok) in &tokens {
                match tok {
                    "T" => trees.push(CellRef::new(r, c)),
                    "." => {}
                    _ => return Err(ParseError::new(line, format!("bad grid token `{tok}`"))),
                }
            }
            let row_counts = parse_counts(&raw.counts_rows, dims.rows, "counts-rows")?
                .ok_or_else(|| ParseError::new(0, "tents puzzles need `counts-rows:`"))?;
            let col_counts = parse_counts(&raw.counts_cols, dims.cols, "counts-cols")?
                .ok_or_else(|| ParseError::new(0, "tents puzzles need `counts-cols:`"))?;
            Ok(Puzzle::Tents(TentsTreesProblem::new(
                dims.rows, trees, row_counts, col_counts,
            )))
        }
        "pieces-coloured" | "pieces-max" => {
            reject(&raw.counts_rows, "counts-rows", "pieces")?;
            reject(&raw.counts_cols, "counts-cols", "pieces")?;
            reject(&raw.diag, "diag", "pieces")?;
            reject_block(&raw.symbols, "symbols", "pieces")?;
            let board = Board::rect(dims.rows, dims.cols).with_wrap(wrap_rows, wrap_cols);
            let mut pieces = vec![None; dims.rows * dims.cols];
            let mut piece_letters = vec!['.'; dims.rows * dims.cols];
            for &(r, c, line, tok) in &tokens {
                let idx = (r - 1) * dims.cols + (c - 1);
                match tok {
                    "." | "#" => {}
                    _ => {
                        let ch = tok.chars().next().unwrap();
                        let pattern = MovePattern::from_letter(ch).ok_or_else(|| {
                            ParseError::new(line, format!("unknown piece letter `{tok}`"))
                        })?;
                        pieces[idx] = Some(pattern);
                        piece_letters[idx] = ch;
                    }
                }
            }
            let initial = parse_initial_queens(&raw, &dims)?;
            for &g in &initial {
                if pieces[(g.row - 1) * dims.cols + (g.col - 1)].is_none() {
                    return Err(ParseError::new(
                        0,
                        format!("initial piece at {g} sits on a cell with no piece type"),
                    ));
                }
            }
            let weights = vec![1; dims.rows * dims.cols];
            let mut problem = PiecesProblem {
                board,
                pieces,
                letters: piece_letters,
                regions: Vec::new(),
                initial,
                weights,
            };
            if typ == "pieces-coloured" {
                reject(&raw.lambda, "lambda", "pieces-coloured")?;
                let entries = parse_region_entries(&raw, &dims)?;
                if entries.is_empty() {
                    return Err(ParseError::new(0, "pieces-coloured needs a `regions:` section"));
                }
                problem.regions =
                    build_regions_from_grid_and_entries(&[], entries, None)?;
                Ok(Puzzle::ColouredPieces(problem))
            } else {
                reject_block(&raw.regions, "regions", "pieces-max")?;
                let lambda = match &raw.lambda {
                    None => None,
                    Some((line, v)) => Some(v.parse::<i64>().map_err(|_| {
                        ParseError::new(*line, format!("bad lambda `{v}`"))
                    })?),
                };
                Ok(Puzzle::MaxPieces { problem, lambda })
            }
        }
        "takuzu" => {
            reject(&raw.lambda, "lambda", "takuzu")?;
            let mut p = TakuzuProblem::new(dims.rows, dims.cols);
            p.wrap_rows = wrap_rows;
            p.wrap_cols = wrap_cols;
            for &(r, c, line, tok) in &tokens {
                match tok {
                    "0" => {
                        p.zeros.insert(CellRef::new(r, c));
                    }
                    "1" => {
                        p.ones.insert(CellRef::new(r, c));
                    }
                    "." => {}
                    _ => return Err(ParseError::new(line, format!("bad grid token `{tok}`"))),
                }
            }
            for (line, content) in &raw.initial {
                let tokens: Vec<&str> = content.split_whitespace().collect();
                let value = match tokens.first() {
                    Some(&"0") => false,
                    Some(&"1") => true,
                    _ => return Err(ParseError::new(*line, "expected `0|1 <row> <col>`")),
                };
                let cell = parse_cell(&tokens[1..], *line, dims.rows, dims.cols)?;
                if value {
                    if p.zeros.contains(&cell) {
                        return Err(ParseError::new(*line, format!("cell {cell} already given as 0")));
                    }
                    p.ones.insert(cell);
                } else {
                    if p.ones.contains(&cell) {
                        return Err(ParseError::new(*line, format!("cell {cell} already given as 1")));
                    }
                    p.zeros.insert(cell);
                }
            }
            for (line, content) in &raw.symbols {
                let tokens: Vec<&str> = content.split_whitespace().collect();
                if tokens.len() != 5 {
                    return Err(ParseError::new(*line, "expected `=|x <r1> <c1> <r2> <c2>`"));
                }
                let kind = match tokens[0] {
                    "=" => SymbolKind::Equal,
                    "x" => SymbolKind::Cross,
                    other => {
                        return Err(ParseError::new(*line, format!("bad symbol `{other}`")));
                    }
                };
                let a = parse_cell(&tokens[1..3], *line, dims.rows, dims.cols)?;
                let b = parse_cell(&tokens[3..5], *line, dims.rows, dims.cols)?;
                p.symbols.push(Symbol { kind, a, b });
            }
            p.row_ones = parse_counts(&raw.counts_rows, dims.rows, "counts-rows")?;
            p.col_ones = parse_counts(&raw.counts_cols, dims.cols, "counts-cols")?;
            let entries = parse_region_entries(&raw, &dims)?;
            for entry in &entries {
                if entry.t {
                    return Err(ParseError::new(
                        entry.line,
                        "takuzu regions use exact counts (t must be 0)",
                    ));
                }
                if entry.cells.is_empty() {
                    return Err(ParseError::new(
                        entry.line,
                        "takuzu regions must list their cells",
                    ));
                }
            }
            p.regions = build_regions_from_grid_and_entries(&[], entries, None)?;
            match &raw.diag {
                None => {}
                Some((line, v)) if v == "repetition" => {
                    let _ = line;
                    p.diagonal_repetition = true;
                }
                Some((line, v)) => {
                    return Err(ParseError::new(
                        *line,
                        format!("takuzu accepts only `diag: repetition`, got `{v}`"),
                    ));
                }
            }
            Ok(Puzzle::Takuzu(p))
        }
        other => Err(ParseError::new(
            typ_line,
            format!("unknown puzzle type `{other}`"),
        )),
    }
}

/// Reads a solution grid in the same alphabet `solve` prints.
pub fn parse_solution_grid(text: &str, puzzle: &Puzzle) -> Result<Vec<bool>, ParseError> {
    let (rows, cols) = puzzle.dims();
    let mut grid_lines = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let stripped = strip_comment(line).trim().to_string();
        if stripped.is_empty() {
            continue;
        }
        grid_lines.push((i + 1, stripped));
    }
    if grid_lines.len() != rows {
        return Err(ParseError::new(
            0,
            format!("solution grid needs {rows} rows, found {}", grid_lines.len()),
        ));
    }
    let mut values = vec![false; rows * cols];
    for (r, (line_no, line)) in grid_lines.iter().enumerate() {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != cols {
            return Err(ParseError::new(
                *line_no,
                format!("expected {cols} tokens, found {}", tokens.len()),
            ));
        }
        for (c, tok) in tokens.iter().enumerate() {
            let cell = CellRef::new(r + 1, c + 1);
            let on = match puzzle {
                Puzzle::NQueens(_) | Puzzle::LQueens(_) | Puzzle::GeneralQueens(_) => match *tok {
                    "Q" => true,
                    "." | "#" => false,
                    _ => {
                        return Err(ParseError::new(*line_no, format!("bad token `{tok}`")));
                    }
                },
                Puzzle::Tents(p) => match *tok {
                    "A" => true,
                    "T" => {
                        if !p.trees.contains(&cell) {
                            return Err(ParseError::new(
                                *line_no,
                                format!("tree marker at {cell} where the puzzle has none"),
                            ));
                        }
                        false
                    }
                    "." => false,
                    _ => {
                        return Err(ParseError::new(*line_no, format!("bad token `{tok}`")));
                    }
                },
                Puzzle::ColouredPieces(_) | Puzzle::MaxPieces { .. } => match *tok {
                    "." | "#" => false,
                    _ => true,
                },
                Puzzle::Takuzu(_) => match *tok {
                    "1" => true,
                    "0" => false,
                    _ => {
                        return Err(ParseError::new(*line_no, format!("bad token `{tok}`")));
                    }
                },
            };
            values[r * cols + c] = on;
        }
    }
    Ok(values)
}
