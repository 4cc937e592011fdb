import logging
from pathlib import Path
from typing import List, Union

import pandas as pd

from tsa.errors import FormatError, MissingFileError
from tsa.models import GroundStation

logger = logging.getLogger(__name__)

STATION_COLUMNS = ['id', 'lat_deg', 'lon_deg', 'alt_m', 'constellation']


def load_stations(path: Union[str, Path]) -> List[GroundStation]:
    """
    Load ground stations from a CSV file

    The header must be id,lat_deg,lon_deg,alt_m,constellation. A longitude
    of -180 is stored as 180.

    Args:
        path: UTF-8 CSV file

    Returns:
        Stations in file order

    Raises:
        MissingFileError: the file does not exist
        FormatError: bad header, non-numeric coordinate or duplicate id
        RangeError: latitude or longitude out of range
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(f"Station file not found: {path}")

    try:
        df = pd.read_csv(
            path,
            encoding='utf-8',
            dtype={'id': str, 'constellation': str},
            skipinitialspace=True,
            comment='#',
        )
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise FormatError(f"Cannot read station file {path}: {e}") from None

    df.columns = [str(column).strip() for column in df.columns]
    if list(df.columns) != STATION_COLUMNS:
        raise FormatError(
            f"Station file {path.name} must have header {','.join(STATION_COLUMNS)}, "
            f"got {','.join(df.columns)}"
        )

    if df[['id', 'constellation']].isna().any().any():
        raise FormatError(f"Station file {path.name}: empty id or constellation")

    for column in ('lat_deg', 'lon_deg', 'alt_m'):
        numeric = pd.to_numeric(df[column], errors='coerce')
        bad = df.loc[numeric.isna(), 'id'].tolist()
        if bad:
            raise FormatError(f"Station file {path.name}: non-numeric {column} for {', '.join(bad)}")
        df[column] = numeric.astype(float)

    duplicates = df.loc[df['id'].duplicated(), 'id'].tolist()
    if duplicates:
        raise FormatError(f"Station file {path.name}: duplicate station ids {', '.join(duplicates)}")

    stations = [
        GroundStation(
            id=row.id.strip(),
            latitude=row.lat_deg,
            longitude=row.lon_deg,
            altitude=row.alt_m,
            constellation_id=row.constellation.strip(),
        )
        for row in df.itertuples(index=False)
    ]
    logger.info(f"Loaded {len(stations)} ground stations from {path.name}")
    return stations


def stations_frame(stations: List[GroundStation]) -> pd.DataFrame:
    """Stations as a DataFrame with the CSV column layout"""
    return pd.DataFrame([station.to_dict() for station in stations], columns=STATION_COLUMNS)
