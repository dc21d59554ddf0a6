import json
from pathlib import Path

import pytest

from lexaudit import Partition, parse_massive, parse_redial

DATA = Path(__file__).parent / "data"


def massive_line(uid, partition, utt, **extra):
    record = {"id": uid, "locale": "en-US", "partition": partition, "utt": utt,
              "annot_utt": utt, "worker_id": "269"}
    record.update(extra)
    return json.dumps(record)


MASSIVE_LINES = [
    massive_line("13371", "train", "how do you subtract numbers",
                 scenario="qa", intent="qa_maths"),
    massive_line("13372", "test", "what time are the hockey games tonight"),
    massive_line("13373", "dev", "who are the top five all time n. h. l. goal scorers"),
    massive_line("13374", "train", "is it warm outside"),
    massive_line("13375", "train", "what kind of music do you have"),
    massive_line("13376", "dev", "the king spoke to alexa"),
    massive_line("13377", "test", "check my new emails and tell me what are they about"),
    massive_line("13378", "train", "i love scary movies"),
    massive_line("13379", "test", "power up the plug socket"),
    massive_line("13380", "dev", "ask alexa to play something warm and quiet"),
]

REDIAL_DIALOGUE = {
    "conversationId": "2903",
    "messages": [
        {"timeOffset": 48, "text": "I saw @119144 last night and really liked it!",
         "senderWorkerId": 30, "messageId": 3183},
        {"timeOffset": 94, "text": "That was a good movie. If you like Superhero "
                                    "Movies you should check out @169419",
         "senderWorkerId": 44, "messageId": 3184},
        {"timeOffset": 112, "text": "Is that out already? I really wanted to see "
                                     "that one.",
         "senderWorkerId": 30, "messageId": 3185},
        {"timeOffset": 140, "text": "email me @ noon about the king and the queen",
         "senderWorkerId": 44, "messageId": 3186},
        {"timeOffset": 150, "text": "I love action movies with a strong hero",
         "senderWorkerId": 30, "messageId": 3187},
    ],
}


@pytest.fixture(scope="session")
def massive_corpus():
    return parse_massive(MASSIVE_LINES, name="massive")


@pytest.fixture(scope="session")
def redial_corpus():
    return parse_redial([json.dumps(REDIAL_DIALOGUE)], Partition.TRAIN, name="redial")


@pytest.fixture(scope="session")
def stem_pairs():
    pairs = []
    for line in (DATA / "english_stem_pairs.tsv").read_text(encoding="utf-8").splitlines():
        if line.startswith("#") or not line.strip():
            continue
        word, _, expected = line.partition("\t")
        pairs.append((word, expected))
    return pairs
