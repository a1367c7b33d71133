"""Counts what pyais' streaming reader yields for the test corpus, by message
type, so the stream assembler can be compared against it.

usage: ais_stream_counts.py <corpus.nmea>
"""
import collections
import json
import sys

from pyais.stream import FileReaderStream


def main(path):
    counts = collections.Counter()
    for msg in FileReaderStream(path):
        counts[int(msg.decode().msg_type)] += 1
    print(json.dumps({str(k): v for k, v in sorted(counts.items())}, sort_keys=True))


if __name__ == "__main__":
    main(sys.argv[1])
