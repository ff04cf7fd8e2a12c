"""Regenerate mini_dump.xml, the 100-row Posts.xml used by the tests.

Row inventory (hand-checked, see the counts printed at the end):

* 60 questions carrying an IoT seed tag           -> kept
* 25 accepted answers of those questions          -> kept
*  5 answers that are not accepted                -> skipped
*  3 questions tagged only outside the tag set    -> skipped
*  1 accepted answer of such a question           -> skipped
*  2 tag-wiki rows (PostTypeId 4 and 5)           -> skipped
*  2 malformed rows                               -> skipped
*  2 rows missing a required attribute            -> skipped

Run from this directory: python3 make_mini_dump.py
"""

import random
from datetime import datetime, timedelta
from html import escape

rng = random.Random(20190601)

SECURITY = [
    "The broker only accepts clients that present a valid TLS certificate.",
    "Never hard-code the Wi-Fi password in the firmware image.",
    "An attacker on the same network can sniff unencrypted MQTT traffic.",
    "I enabled SSL on port 8883 but the handshake fails with a certificate error.",
    "Store the private key in the secure element instead of flash memory.",
    "Is it safe to expose the device API to the internet without authentication?",
    "The default SSH password on the image is a well-known vulnerability.",
    "Use a unique access token per device so a leaked token can be revoked.",
    "The firmware update must be signed, otherwise anyone can flash malicious code.",
    "Encrypt the payload with AES before sending it over the radio link.",
    "My certificate expired and now the gateway rejects every TLS connection.",
    "How do I verify the server certificate on an ESP8266 with limited memory?",
    "Disable password login for SSH and use key-based authentication only.",
    "The camera was hacked because the admin password was never changed.",
    "Hashing the password with a salt protects it if the database leaks.",
    "A replay attack is possible because the messages carry no nonce.",
    "Mutual TLS gives each device its own certificate and private key.",
    "The token is sent in plain text, so anyone on the network can steal it.",
    "Restrict the firewall so only the broker can reach the device.",
    "Self-signed certificates are fine for testing but risky in production.",
]

GENERAL = [
    "I am building a weather station with a Raspberry Pi and a few sensors.",
    "The sensor readings are published to the broker every ten seconds.",
    "My Arduino sketch compiles but the LED never turns on.",
    "The ESP8266 keeps resetting when the motor starts.",
    "I connected the DHT22 sensor to GPIO pin 4 as shown in the tutorial.",
    "The serial monitor prints garbage characters at 9600 baud.",
    "Battery life is much shorter than the datasheet suggests.",
    "How can I read the temperature sensor over the I2C bus?",
    "The dashboard shows the data with a delay of several minutes.",
    "I tried version 1.2.3 of the library, e.g. the one from the package manager.",
    "The board draws about 80 mA while the radio is transmitting.",
    "Deep sleep mode reduces the power consumption to a few microamps.",
    "The Bluetooth module pairs with the phone but drops after a minute.",
    "I store the sensor data in a time series database on the server.",
    "The relay clicks but the lamp does not switch on.",
    "Which pull-up resistor value should I use for the button?",
    "The Wi-Fi signal is weak in the garage where the device is mounted.",
    "I used the official Docker image to run the broker on a small server.",
    "The JSON message is parsed on the gateway and forwarded to the cloud.",
    "Thanks, that solved the problem with the pin configuration.",
]

CODE = [
    "<pre><code>client.connect(\"device-1\");\nclient.publish(\"home/temp\", payload);\n</code></pre>",
    "<pre><code>sudo systemctl restart mosquitto\n</code></pre>",
    "<pre><code>digitalWrite(LED_BUILTIN, HIGH);\ndelay(1000);\n</code></pre>",
]

LINKS = [
    "See https://example.org/docs/mqtt-tls for the details.",
    "The tutorial at http://example.com/esp8266/setup explains the wiring.",
]

# (tags, has a security flavour)
TAG_SETS = [
    (["iot", "mqtt"], False),
    (["iot", "mqtt", "ssl"], True),
    (["iot", "security"], True),
    (["arduino", "esp8266"], False),
    (["arduino", "esp8266", "ssl"], True),
    (["raspberry-pi", "python"], False),
    (["raspberry-pi", "ssh", "security"], True),
    (["iot", "encryption"], True),
    (["aws-iot", "mqtt", "authentication"], True),
    (["azure-iot-hub", "mqtt"], False),
    (["arduino", "bluetooth"], False),
    (["raspberry-pi", "wifi"], False),
]

OFF_FILTER_TAGS = [
    ["javascript", "css"],
    ["javascript", "html"],
    ["javascript", "reactjs"],
]


def timestamp(t):
    return t.strftime("%Y-%m-%dT%H:%M:%S.") + f"{t.microsecond // 1000:03d}"


def random_time():
    start = datetime(2012, 1, 1)
    span = (datetime(2019, 12, 31) - start).total_seconds()
    return start + timedelta(seconds=rng.randrange(int(span)), milliseconds=rng.randrange(1000))


def paragraph(pool, n):
    return "<p>" + " ".join(rng.sample(pool, n)) + "</p>"


def body(security, extra_security=0):
    parts = []
    if security:
        parts.append(paragraph(GENERAL, 1))
        parts.append(paragraph(SECURITY, 2 + extra_security))
    else:
        parts.append(paragraph(GENERAL, 2))
    if rng.random() < 0.4:
        parts.append(rng.choice(CODE))
    if rng.random() < 0.25:
        parts.append("<p>" + rng.choice(LINKS) + "</p>")
    parts.append(paragraph(GENERAL, 1))
    return "\n".join(parts)


def attrs(**fields):
    return " ".join(f'{k}="{escape(str(v), quote=True).replace(chr(10), "&#xA;")}"' for k, v in fields.items() if v is not None)


def row(**fields):
    return f"  <row {attrs(**fields)} />"


def tag_attr(tags):
    return "".join(f"<{t}>" for t in tags)


rows = []
next_id = 1000


def new_id():
    global next_id
    next_id += rng.randrange(1, 40)
    return next_id


questions = []
for i in range(60):
    tags, security = TAG_SETS[i % len(TAG_SETS)]
    if i == 7:
        tags = ["iot", "javascript", "node.js"]
    created = random_time()
    questions.append({"id": new_id(), "tags": tags, "security": security, "created": created})

accepted_for = set(rng.sample(range(60), 25))
answer_rows = []
for i, q in enumerate(questions):
    if i in accepted_for:
        aid = new_id()
        q["accepted"] = aid
        answer_rows.append(
            row(
                Id=aid,
                PostTypeId=2,
                ParentId=q["id"],
                CreationDate=timestamp(q["created"] + timedelta(days=rng.randrange(1, 60))),
                Score=rng.randrange(0, 30),
                Body=body(q["security"]),
            )
        )

for q in questions:
    rows.append(
        row(
            Id=q["id"],
            PostTypeId=1,
            AcceptedAnswerId=q.get("accepted"),
            CreationDate=timestamp(q["created"]),
            Score=rng.randrange(-2, 50),
            ViewCount=rng.randrange(20, 20000),
            Body=body(q["security"], extra_security=1 if q["security"] else 0),
            Tags=tag_attr(q["tags"]),
        )
    )
rows.extend(answer_rows)

# answers that were not accepted
for parent in rng.sample(questions, 5):
    rows.append(
        row(
            Id=new_id(),
            PostTypeId=2,
            ParentId=parent["id"],
            CreationDate=timestamp(parent["created"] + timedelta(days=3)),
            Score=0,
            Body=body(False),
        )
    )

# questions outside the tag set, one with an accepted answer
off_ids = []
for n, tags in enumerate(OFF_FILTER_TAGS):
    qid, created = new_id(), random_time()
    off_ids.append(qid)
    aid = new_id() if n == 0 else None
    rows.append(
        row(
            Id=qid,
            PostTypeId=1,
            AcceptedAnswerId=aid,
            CreationDate=timestamp(created),
            ViewCount=rng.randrange(20, 2000),
            Body="<p>My page layout breaks when the window is resized. The button moves below the form.</p>",
            Tags=tag_attr(tags),
        )
    )
    if aid:
        rows.append(
            row(
                Id=aid,
                PostTypeId=2,
                ParentId=qid,
                CreationDate=timestamp(created + timedelta(days=1)),
                Body="<p>Use a flex container for the form. The button then stays in place.</p>",
            )
        )

# tag wiki excerpt and tag wiki body
rows.append(row(Id=new_id(), PostTypeId=4, CreationDate="2013-02-01T10:00:00.000",
                Body="<p>The Internet of Things connects everyday devices to the internet.</p>"))
rows.append(row(Id=new_id(), PostTypeId=5, CreationDate="2013-02-01T10:00:00.000",
                Body="<p>Use this tag for questions about connected devices.</p>"))

# malformed rows: unterminated element, non-numeric id
rows.append('  <row Id="%d" PostTypeId="1" CreationDate="2015-05-05T05:05:05.000" Body="&lt;p&gt;cut off' % new_id())
rows.append(row(Id="12x", PostTypeId=1, CreationDate="2015-06-06T06:06:06.000",
                Body="<p>Broken id.</p>", Tags="<iot>"))

# rows missing a required attribute: no CreationDate, no Body
rows.append(row(Id=new_id(), PostTypeId=1, Body="<p>No date here.</p>", Tags="<iot>"))
rows.append(row(Id=new_id(), PostTypeId=1, CreationDate="2016-01-01T00:00:00.000", Tags="<iot><mqtt>"))

# interleave so answers do not always follow their questions
head, tail = rows[:60], rows[60:]
mixed = head[:]
for r in tail:
    mixed.insert(rng.randrange(len(mixed) + 1), r)

with open("mini_dump.xml", "w", encoding="utf-8") as f:
    f.write('<?xml version="1.0" encoding="utf-8"?>\n<posts>\n')
    for r in mixed:
        f.write(r + "\n")
    f.write("</posts>\n")

print(f"rows={len(mixed)} questions=60 accepted={len(accepted_for)} skipped={len(mixed) - 60 - len(accepted_for)}")
