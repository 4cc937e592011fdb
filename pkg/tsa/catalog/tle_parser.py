"""
Fixed-column two-line element set reading and writing.

Accepts bare two-line groups, three-line groups with a free-text name line,
and 3LE name lines that start with "0 ". Catalog numbers above 99999 use
the Alpha-5 letter prefix.
"""
import logging
from pathlib import Path
from typing import Iterable, List, Tuple, Union

from tsa.errors import ChecksumError, FormatError, MissingFileError, RangeError
from tsa.models import TleRecord

logger = logging.getLogger(__name__)

TLE_LINE_LENGTH = 69

# Alpha-5 leading letters; I and O are skipped
ALPHA5_LETTERS = "ABCDEFGHJKLMNPQRSTUVWXYZ"


def compute_checksum(line: str) -> int:
    """Modulo-10 sum of the digits in the first 68 columns, each minus sign counting 1"""
    total = 0
    for char in line[:68]:
        if char.isdigit():
            total += int(char)
        elif char == '-':
            total += 1
    return total % 10


def decode_catalog_number(field: str) -> int:
    """
    Decode the five-column catalog number, including Alpha-5 forms

    Args:
        field: Columns 3-7 of either TLE line

    Returns:
        Catalog number; 'A0000' decodes to 100000
    """
    text = field.strip()
    if not text:
        raise FormatError("Empty catalog number")
    head = text[0].upper()
    if head.isalpha():
        if head not in ALPHA5_LETTERS or not text[1:].isdigit() or len(text) != 5:
            raise FormatError(f"Invalid Alpha-5 catalog number {field!r}")
        return (ALPHA5_LETTERS.index(head) + 10) * 10000 + int(text[1:])
    if not text.isdigit():
        raise FormatError(f"Non-numeric catalog number {field!r}")
    return int(text)


def encode_catalog_number(number: int) -> str:
    if 0 <= number <= 99999:
        return f"{number:05d}"
    lead, rest = divmod(number, 10000)
    if not 10 <= lead < 10 + len(ALPHA5_LETTERS):
        raise RangeError(f"Catalog number {number} cannot be written in five columns")
    return f"{ALPHA5_LETTERS[lead - 10]}{rest:04d}"


def _number(field: str, name: str, line_no: int) -> float:
    try:
        return float(field)
    except ValueError:
        raise FormatError(f"Line {line_no}: non-numeric {name} field {field!r}") from None


def _integer(field: str, name: str, line_no: int, blank: int = 0) -> int:
    text = field.strip()
    if not text:
        return blank
    if not text.lstrip('+-').isdigit():
        raise FormatError(f"Line {line_no}: non-numeric {name} field {field!r}")
    return int(text)


def _assumed_decimal(field: str, name: str) -> float:
    """Decode the ' 12345-3' form: mantissa with an implied leading '0.' and a signed exponent"""
    text = field.strip()
    if not text:
        return 0.0
    sign = '-' if text[0] == '-' else ''
    if text[0] in '+-':
        text = text[1:]
    if len(text) >= 2 and text[-2] in '+-':
        mantissa, exponent = text[:-2], text[-2:]
    else:
        mantissa, exponent = text, '+0'
    mantissa = mantissa.strip()
    if not mantissa.isdigit() or not exponent[1:].isdigit():
        raise FormatError(f"Line 1: malformed {name} field {field!r}")
    return float(f"{sign}0.{mantissa}e{exponent}")


def _format_assumed_decimal(value: float, name: str) -> str:
    if value == 0.0:
        return " 00000-0"
    mantissa, exponent = f"{abs(value):.4e}".split('e')
    exponent_value = int(exponent) + 1
    if abs(exponent_value) > 9:
        raise RangeError(f"{name} value {value} does not fit the TLE exponent field")
    sign = '-' if value < 0 else ' '
    exponent_sign = '-' if exponent_value < 0 else '+'
    return f"{sign}{mantissa.replace('.', '')}{exponent_sign}{abs(exponent_value)}"


def _format_ndot(value: float) -> str:
    if abs(value) >= 1.0:
        raise RangeError(f"ndot value {value} does not fit the TLE field")
    sign = '-' if value < 0 else ' '
    return f"{sign}{f'{abs(value):.8f}'[1:]}"


def _check_line(line: str, line_no: int, verify_checksums: bool) -> bool:
    if len(line) != TLE_LINE_LENGTH:
        raise FormatError(f"Line {line_no}: expected {TLE_LINE_LENGTH} characters, got {len(line)}")
    if line[0] != str(line_no):
        raise FormatError(f"Line {line_no}: does not start with '{line_no}'")
    if not line[68].isdigit():
        raise FormatError(f"Line {line_no}: checksum column is not a digit")
    ok = compute_checksum(line) == int(line[68])
    if not ok and verify_checksums:
        raise ChecksumError(
            f"Line {line_no} checksum mismatch: expected {compute_checksum(line)}, found {line[68]}"
        )
    return ok


def parse_tle_group(name: str, line1: str, line2: str, verify_checksums: bool = True) -> TleRecord:
    """
    Parse a single TLE group

    Args:
        name: Satellite name, may be empty
        line1: First element line
        line2: Second element line
        verify_checksums: Raise ChecksumError on a mismatch instead of flagging it

    Returns:
        Parsed TleRecord
    """
    line1 = line1.rstrip()
    line2 = line2.rstrip()
    line1_ok = _check_line(line1, 1, verify_checksums)
    line2_ok = _check_line(line2, 2, verify_checksums)

    catalog_number = decode_catalog_number(line1[2:7])
    if decode_catalog_number(line2[2:7]) != catalog_number:
        raise FormatError(f"Catalog numbers differ between lines: {line1[2:7]!r} and {line2[2:7]!r}")

    two_digit_year = _integer(line1[18:20], 'epoch year', 1)
    epoch_year = 2000 + two_digit_year if two_digit_year < 57 else 1900 + two_digit_year
    epoch_day = _number(line1[20:32], 'epoch day', 1)
    if not 1.0 <= epoch_day < 367.0:
        raise RangeError(f"Epoch day {epoch_day} outside [1, 367)")

    inclination = _number(line2[8:16], 'inclination', 2)
    raan = _number(line2[17:25], 'raan', 2)
    eccentricity_field = line2[26:33].strip()
    if not eccentricity_field.isdigit():
        raise FormatError(f"Line 2: non-numeric eccentricity field {line2[26:33]!r}")
    eccentricity = float(f"0.{eccentricity_field}")
    arg_perigee = _number(line2[34:42], 'argument of perigee', 2)
    mean_anomaly = _number(line2[43:51], 'mean anomaly', 2)
    mean_motion = _number(line2[52:63], 'mean motion', 2)

    if not 0.0 <= inclination <= 180.0:
        raise RangeError(f"Inclination {inclination} outside [0, 180]")
    for label, angle in (('raan', raan), ('argument of perigee', arg_perigee), ('mean anomaly', mean_anomaly)):
        if not 0.0 <= angle < 360.0:
            raise RangeError(f"{label} {angle} outside [0, 360)")
    if mean_motion <= 0.0:
        raise RangeError(f"Mean motion {mean_motion} must be positive")

    return TleRecord(
        name=name.strip(),
        catalog_number=catalog_number,
        classification=line1[7],
        intl_designator=line1[9:17].strip(),
        epoch_year=epoch_year,
        epoch_day=epoch_day,
        ndot=_number(line1[33:43], 'ndot', 1),
        nddot=_assumed_decimal(line1[44:52], 'nddot'),
        bstar=_assumed_decimal(line1[53:61], 'bstar'),
        ephemeris_type=_integer(line1[62], 'ephemeris type', 1),
        element_set=_integer(line1[64:68], 'element set', 1),
        inclination=inclination,
        raan=raan,
        eccentricity=eccentricity,
        arg_perigee=arg_perigee,
        mean_anomaly=mean_anomaly,
        mean_motion=mean_motion,
        rev_number=_integer(line2[63:68], 'revolution number', 2),
        line1_checksum_ok=line1_ok,
        line2_checksum_ok=line2_ok,
        line1=line1,
        line2=line2,
    )


def _is_group_start(lines: List[str], i: int) -> bool:
    return (
        i + 1 < len(lines)
        and lines[i].startswith('1 ')
        and lines[i + 1].startswith('2 ')
    )


def parse_tle(text: str, verify_checksums: bool = True) -> List[TleRecord]:
    """
    Parse every TLE group in a block of text

    Args:
        text: Two-line or three-line element sets, one after another
        verify_checksums: Reject groups whose line checksums fail

    Returns:
        One TleRecord per group, in input order

    Raises:
        ChecksumError: a line checksum does not verify
        FormatError: wrong line length, non-numeric field or a dangling line
    """
    lines = [line.rstrip() for line in text.splitlines() if line.strip()]
    records = []
    i = 0
    while i < len(lines):
        if _is_group_start(lines, i):
            name = ""
            first = i
        elif _is_group_start(lines, i + 1):
            name = lines[i][2:] if lines[i].startswith('0 ') else lines[i]
            first = i + 1
        else:
            raise FormatError(f"Line {i + 1} of TLE text is not part of a TLE group: {lines[i][:40]!r}")

        records.append(parse_tle_group(name, lines[first], lines[first + 1], verify_checksums))
        i = first + 2

    logger.debug(f"Parsed {len(records)} TLE records")
    return records


def load_tle_file(path: Union[str, Path], verify_checksums: bool = True) -> List[TleRecord]:
    """Read and parse a TLE catalog file"""
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"TLE file not found: {path}")
    records = parse_tle(path.read_text(encoding='utf-8'), verify_checksums)
    logger.info(f"Loaded {len(records)} satellites from {path.name}")
    return records


def format_tle(record: TleRecord) -> Tuple[str, str]:
    """
    Serialize a record back to its two element lines, checksums recomputed

    Args:
        record: Record to write

    Returns:
        (line1, line2), each 69 characters
    """
    catalog = encode_catalog_number(record.catalog_number)
    body1 = (
        f"1 {catalog}{record.classification[:1] or 'U'} "
        f"{record.intl_designator[:8]:<8} "
        f"{record.epoch_year % 100:02d}{record.epoch_day:012.8f} "
        f"{_format_ndot(record.ndot)} "
        f"{_format_assumed_decimal(record.nddot, 'nddot')} "
        f"{_format_assumed_decimal(record.bstar, 'bstar')} "
        f"{record.ephemeris_type % 10:d} "
        f"{record.element_set % 10000:>4d}"
    )

    eccentricity = f"{record.eccentricity:.7f}"
    if not eccentricity.startswith('0.'):
        raise RangeError(f"Eccentricity {record.eccentricity} outside [0, 1)")
    body2 = (
        f"2 {catalog} "
        f"{record.inclination:8.4f} "
        f"{record.raan:8.4f} "
        f"{eccentricity[2:]} "
        f"{record.arg_perigee:8.4f} "
        f"{record.mean_anomaly:8.4f} "
        f"{record.mean_motion:11.8f}"
        f"{record.rev_number % 100000:5d}"
    )
    if len(body1) != 68 or len(body2) != 68:
        raise RangeError(f"Record {record.satellite_id} does not fit the fixed TLE columns")
    return body1 + str(compute_checksum(body1)), body2 + str(compute_checksum(body2))


def to_tle_text(records: Iterable[TleRecord]) -> str:
    """Three-line text for a list of records"""
    blocks = []
    for record in records:
        line1, line2 = format_tle(record)
        if record.name:
            blocks.append(record.name)
        blocks.extend([line1, line2])
    return "\n".join(blocks) + "\n"
