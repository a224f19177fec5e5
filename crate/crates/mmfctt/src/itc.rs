//! ITC2007 track 3 instance files (`.ctt` and `.ectt`) and solution files.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use mmfctt_core::model::{Course, Curriculum, Instance, Room, Slot, Timetable};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError::Syntax { line, message: message.into() })
}

/// An instance together with the warnings raised while reading it.
#[derive(Debug, Clone)]
pub struct ParsedInstance {
    pub instance: Instance,
    pub warnings: Vec<String>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    Header,
    Courses,
    Rooms,
    Curricula,
    Unavailability,
    Skipped,
}

#[derive(Default)]
struct Declared {
    name: Option<String>,
    courses: Option<(usize, usize)>,
    rooms: Option<(usize, usize)>,
    days: Option<usize>,
    periods_per_day: Option<usize>,
    curricula: Option<(usize, usize)>,
    constraints: Option<(usize, usize)>,
}

fn number<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T, ParseError> {
    tok.parse().or_else(|_| err(line, format!("{what}: expected a number, found {tok:?}")))
}

pub fn read_instance(path: impl AsRef<Path>) -> Result<ParsedInstance, ParseError> {
    let path = path.as_ref();
    let text =
        std::fs::read_to_string(path).map_err(|source| ParseError::Io { path: path.display().to_string(), source })?;
    parse_instance(&text)
}

/// Parses the basic track 3 model. Extended-format headers, extra columns
/// and the `ROOM_CONSTRAINTS` section are skipped with a warning.
pub fn parse_instance(text: &str) -> Result<ParsedInstance, ParseError> {
    let mut d = Declared::default();
    let mut warnings = Vec::new();
    let mut section = Section::Header;
    let mut courses: Vec<Course> = Vec::new();
    let mut rooms: Vec<Room> = Vec::new();
    // line of each course and room, for duplicate reports
    let mut course_lines = Vec::new();
    let mut room_lines = Vec::new();
    let mut curricula: Vec<(usize, String, Vec<String>)> = Vec::new();
    let mut unavailable: Vec<(usize, String, usize, usize)> = Vec::new();
    let mut extra_columns: Vec<&'static str> = Vec::new();
    let mut ended = false;
    let mut last_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.trim();
        if content.is_empty() {
            continue;
        }
        if ended {
            return err(line, "content after END.");
        }
        if content == "END." {
            ended = true;
            continue;
        }
        if let Some(name) = content.strip_suffix(':').filter(|s| !s.contains(char::is_whitespace)) {
            section = match name {
                "COURSES" => Section::Courses,
                "ROOMS" => Section::Rooms,
                "CURRICULA" => Section::Curricula,
                "UNAVAILABILITY_CONSTRAINTS" => Section::Unavailability,
                other => {
                    warnings.push(format!("line {line}: skipping section {other}"));
                    Section::Skipped
                }
            };
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        match section {
            Section::Header => {
                let Some((key, value)) = content.split_once(':') else {
                    return err(line, format!("expected a header line, found {content:?}"));
                };
                let value = value.trim();
                match key.trim() {
                    "Name" => d.name = Some(value.to_string()),
                    "Courses" => d.courses = Some((number(value, line, "Courses")?, line)),
                    "Rooms" => d.rooms = Some((number(value, line, "Rooms")?, line)),
                    "Days" => d.days = Some(number(value, line, "Days")?),
                    "Periods_per_day" => d.periods_per_day = Some(number(value, line, "Periods_per_day")?),
                    "Curricula" => d.curricula = Some((number(value, line, "Curricula")?, line)),
                    "Constraints" | "UnavailabilityConstraints" => {
                        d.constraints = Some((number(value, line, key.trim())?, line))
                    }
                    other => warnings.push(format!("line {line}: ignoring header {other}")),
                }
            }
            Section::Courses => {
                if toks.len() < 5 {
                    return err(line, "course needs: id teacher lectures min_days students");
                }
                if toks.len() > 5 && !extra_columns.contains(&"COURSES") {
                    extra_columns.push("COURSES");
                    warnings.push(format!("line {line}: ignoring extra course columns"));
                }
                course_lines.push(line);
                courses.push(Course {
                    id: toks[0].to_string(),
                    teacher: toks[1].to_string(),
                    lectures: number(toks[2], line, "lectures")?,
                    min_working_days: number(toks[3], line, "min_days")?,
                    students: number(toks[4], line, "students")?,
                });
            }
            Section::Rooms => {
                if toks.len() < 2 {
                    return err(line, "room needs: id capacity");
                }
                if toks.len() > 2 && !extra_columns.contains(&"ROOMS") {
                    extra_columns.push("ROOMS");
                    warnings.push(format!("line {line}: ignoring extra room columns"));
                }
                room_lines.push(line);
                rooms.push(Room { id: toks[0].to_string(), capacity: number(toks[1], line, "capacity")? });
            }
            Section::Curricula => {
                if toks.len() < 2 {
                    return err(line, "curriculum needs: id count members");
                }
                let count: usize = number(toks[1], line, "member count")?;
                if toks.len() - 2 != count {
                    return err(
                        line,
                        format!("curriculum {} declares {count} members, lists {}", toks[0], toks.len() - 2),
                    );
                }
                curricula.push((line, toks[0].to_string(), toks[2..].iter().map(|s| s.to_string()).collect()));
            }
            Section::Unavailability => {
                if toks.len() != 3 {
                    return err(line, "unavailability needs: course day period");
                }
                unavailable.push((
                    line,
                    toks[0].to_string(),
                    number(toks[1], line, "day")?,
                    number(toks[2], line, "period")?,
                ));
            }
            Section::Skipped => {}
        }
    }
    if !ended {
        warnings.push(format!("line {last_line}: missing END."));
    }

    let Some(days) = d.days else {
        return err(1, "missing Days header");
    };
    let Some(ppd) = d.periods_per_day else {
        return err(1, "missing Periods_per_day header");
    };
    for (declared, found, what) in [
        (d.courses, courses.len(), "courses"),
        (d.rooms, rooms.len(), "rooms"),
        (d.curricula, curricula.len(), "curricula"),
        (d.constraints, unavailable.len(), "unavailability constraints"),
    ] {
        match declared {
            Some((n, line)) if n != found => return err(line, format!("declares {n} {what}, found {found}")),
            None => return err(1, format!("missing header for {what}")),
            _ => {}
        }
    }

    let mut course_index = HashMap::new();
    for (c, course) in courses.iter().enumerate() {
        if course_index.insert(course.id.clone(), c).is_some() {
            return err(course_lines[c], format!("duplicate course {}", course.id));
        }
    }
    let mut room_ids = std::collections::HashSet::new();
    for (room, &line) in rooms.iter().zip(&room_lines) {
        if !room_ids.insert(room.id.as_str()) {
            return err(line, format!("duplicate room {}", room.id));
        }
    }
    let mut model_curricula = Vec::with_capacity(curricula.len());
    for (line, id, members) in curricula {
        let mut idx = Vec::with_capacity(members.len());
        for m in &members {
            match course_index.get(m) {
                Some(&c) if !idx.contains(&c) => idx.push(c),
                Some(_) => return err(line, format!("curriculum {id} lists {m} twice")),
                None => return err(line, format!("curriculum {id} references unknown course {m}")),
            }
        }
        model_curricula.push(Curriculum { id, courses: idx });
    }
    let mut pairs = Vec::with_capacity(unavailable.len());
    for (line, course, day, period) in unavailable {
        let Some(&c) = course_index.get(&course) else {
            return err(line, format!("unknown course {course}"));
        };
        if day >= days || period >= ppd {
            return err(line, format!("day {day} period {period} is out of range"));
        }
        pairs.push((c, day * ppd + period));
    }

    let name = d.name.unwrap_or_default();
    let instance =
        Instance::new(name, courses, rooms, days, ppd, model_curricula, &pairs).or_else(|e| err(1, e.to_string()))?;
    Ok(ParsedInstance { instance, warnings })
}

/// Writes `i` in the basic `.ctt` format.
pub fn write_instance(i: &Instance) -> String {
    let ppd = i.periods_per_day();
    let unavailable: Vec<(usize, usize)> = (0..i.courses().len())
        .flat_map(|c| (0..i.periods()).filter(move |&p| !i.is_available(c, p)).map(move |p| (c, p)))
        .collect();
    let mut out = String::new();
    let w = &mut out;
    let _ = writeln!(w, "Name: {}", i.name());
    let _ = writeln!(w, "Courses: {}", i.courses().len());
    let _ = writeln!(w, "Rooms: {}", i.rooms().len());
    let _ = writeln!(w, "Days: {}", i.days());
    let _ = writeln!(w, "Periods_per_day: {ppd}");
    let _ = writeln!(w, "Curricula: {}", i.curricula().len());
    let _ = writeln!(w, "Constraints: {}", unavailable.len());
    let _ = writeln!(w, "\nCOURSES:");
    for c in i.courses() {
        let _ = writeln!(w, "{} {} {} {} {}", c.id, c.teacher, c.lectures, c.min_working_days, c.students);
    }
    let _ = writeln!(w, "\nROOMS:");
    for r in i.rooms() {
        let _ = writeln!(w, "{} {}", r.id, r.capacity);
    }
    let _ = writeln!(w, "\nCURRICULA:");
    for u in i.curricula() {
        let members: Vec<&str> = u.courses.iter().map(|&c| i.courses()[c].id.as_str()).collect();
        let _ = writeln!(w, "{} {} {}", u.id, members.len(), members.join(" "));
    }
    let _ = writeln!(w, "\nUNAVAILABILITY_CONSTRAINTS:");
    for (c, p) in unavailable {
        let _ = writeln!(w, "{} {} {}", i.courses()[c].id, p / ppd, p % ppd);
    }
    let _ = writeln!(w, "\nEND.");
    out
}

/// One line per placed lecture: `CourseID RoomID Day Period`.
pub fn write_solution(i: &Instance, t: &Timetable) -> String {
    let mut out = String::new();
    for (l, s) in t.placed() {
        let course = &i.courses()[i.course_of(l)].id;
        let room = &i.rooms()[s.room].id;
        let ppd = i.periods_per_day();
        writeln!(out, "{course} {room} {} {}", s.period / ppd, s.period % ppd).expect("writing to a String");
    }
    out
}

/// Reads a solution, giving each course's lines to its lectures in order.
pub fn parse_solution(i: &Instance, text: &str) -> Result<Timetable, ParseError> {
    let courses: HashMap<&str, usize> = i.courses().iter().enumerate().map(|(c, x)| (x.id.as_str(), c)).collect();
    let rooms: HashMap<&str, usize> = i.rooms().iter().enumerate().map(|(r, x)| (x.id.as_str(), r)).collect();
    let mut next: Vec<usize> = (0..i.courses().len()).map(|c| i.lectures_of(c).start).collect();
    let mut t = Timetable::empty(i);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        let [course, room, day, period] = toks[..] else {
            return err(line, "expected: course room day period");
        };
        let Some(&c) = courses.get(course) else {
            return err(line, format!("unknown course {course}"));
        };
        let Some(&r) = rooms.get(room) else {
            return err(line, format!("unknown room {room}"));
        };
        let (day, period): (usize, usize) = (number(day, line, "day")?, number(period, line, "period")?);
        if day >= i.days() || period >= i.periods_per_day() {
            return err(line, format!("day {day} period {period} is out of range"));
        }
        if next[c] == i.lectures_of(c).end {
            return err(line, format!("too many lectures of {course}"));
        }
        t.place(next[c], Slot { period: day * i.periods_per_day() + period, room: r });
        next[c] += 1;
    }
    Ok(t)
}
