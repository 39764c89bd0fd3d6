from stride.codec.records import (
    dumps_record, from_record, loads_record, read_records, to_record,
    write_records)
from stride.codec.tagged import parse_tagged, serialize_tagged

__all__ = [
    'dumps_record', 'from_record', 'loads_record', 'read_records',
    'to_record', 'write_records', 'parse_tagged', 'serialize_tagged']
