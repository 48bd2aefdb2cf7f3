import re
import subprocess
import sys
import time

import pytest

from hcie import bench, cli, rsa


def write_pair(tmp_path, name, pair):
    pub, priv = pair
    pub_path = tmp_path / f"{name}.pub"
    key_path = tmp_path / f"{name}.key"
    pub_path.write_bytes(rsa.serialize_key(pub))
    key_path.write_bytes(rsa.serialize_key(priv))
    return pub_path, key_path


@pytest.fixture
def keyfiles(tmp_path, recipient_pair, sender_pair):
    bob_pub, bob_key = write_pair(tmp_path, "bob", recipient_pair)
    alice_pub, alice_key = write_pair(tmp_path, "alice", sender_pair)
    return {
        "bob.pub": bob_pub, "bob.key": bob_key,
        "alice.pub": alice_pub, "alice.key": alice_key,
    }


class TestKeygen:
    def test_writes_a_matched_pair(self, tmp_path, capsys):
        out = tmp_path / "pair"
        assert cli.main(["keygen", "--bits", "512", "--out", str(out)]) == 0
        pub = rsa.parse_key((tmp_path / "pair.pub").read_bytes())
        priv = rsa.parse_key((tmp_path / "pair.key").read_bytes())
        assert isinstance(pub, rsa.RsaPublicKey)
        assert isinstance(priv, rsa.RsaPrivateKey)
        assert (pub.n, pub.e) == (priv.n, priv.e)
        assert rsa.fingerprint(pub).hex() in capsys.readouterr().out

    def test_private_key_file_mode(self, tmp_path):
        out = tmp_path / "pair"
        cli.main(["keygen", "--bits", "512", "--out", str(out)])
        assert (tmp_path / "pair.key").stat().st_mode & 0o777 == 0o600

    def test_nonstandard_bits_is_usage_error(self, tmp_path, capsys):
        assert cli.main(["keygen", "--bits", "77", "--out", str(tmp_path / "x")]) == 1
        assert "error" in capsys.readouterr().err

    def test_insecure_flag_allows_small(self, tmp_path):
        assert cli.main(
            ["keygen", "--bits", "64", "--insecure", "--out", str(tmp_path / "tiny")]
        ) == 0


class TestSealOpen:
    def test_file_round_trip(self, tmp_path, keyfiles, capsys):
        src = tmp_path / "secret.txt"
        src.write_bytes(b"between alice and bob")
        env_path = tmp_path / "secret.hcie"
        out_path = tmp_path / "secret.out"

        assert cli.main([
            "seal", "--in", str(src), "--out", str(env_path),
            "--to", str(keyfiles["bob.pub"]), "--from", str(keyfiles["alice.key"]),
        ]) == 0
        assert cli.main([
            "open", "--in", str(env_path), "--out", str(out_path),
            "--to", str(keyfiles["bob.key"]), "--from", str(keyfiles["alice.pub"]),
        ]) == 0
        assert out_path.read_bytes() == b"between alice and bob"

    def test_open_with_wrong_sender_key(self, tmp_path, keyfiles, capsys):
        src = tmp_path / "m.txt"
        src.write_bytes(b"msg")
        env_path = tmp_path / "m.hcie"
        cli.main([
            "seal", "--in", str(src), "--out", str(env_path),
            "--to", str(keyfiles["bob.pub"]), "--from", str(keyfiles["alice.key"]),
        ])
        capsys.readouterr()
        # bob's own public key is not alice's: the signature cannot verify
        code = cli.main([
            "open", "--in", str(env_path), "--out", str(tmp_path / "m.out"),
            "--to", str(keyfiles["bob.key"]), "--from", str(keyfiles["bob.pub"]),
        ])
        assert code == 2
        assert "signature" in capsys.readouterr().err

    def test_open_garbage_envelope(self, tmp_path, keyfiles, capsys):
        bad = tmp_path / "bad.hcie"
        bad.write_bytes(b"HCIEgarbage")
        code = cli.main([
            "open", "--in", str(bad), "--out", str(tmp_path / "bad.out"),
            "--to", str(keyfiles["bob.key"]), "--from", str(keyfiles["alice.pub"]),
        ])
        assert code == 2

    def test_key_role_confusion_rejected(self, tmp_path, keyfiles, capsys):
        src = tmp_path / "m.txt"
        src.write_bytes(b"msg")
        code = cli.main([
            "seal", "--in", str(src), "--out", str(tmp_path / "m.hcie"),
            "--to", str(keyfiles["bob.key"]),  # private where public belongs
            "--from", str(keyfiles["alice.key"]),
        ])
        assert code == 2


class TestSignVerify:
    def test_round_trip(self, tmp_path, keyfiles, capsys):
        doc = tmp_path / "doc.bin"
        doc.write_bytes(b"contract body")
        sig = tmp_path / "doc.sig"
        assert cli.main([
            "sign", "--in", str(doc), "--key", str(keyfiles["alice.key"]), "--out", str(sig),
        ]) == 0
        assert cli.main([
            "verify", "--in", str(doc), "--key", str(keyfiles["alice.pub"]), "--sig", str(sig),
        ]) == 0
        assert "signature OK" in capsys.readouterr().out

    def test_tampered_document_fails(self, tmp_path, keyfiles, capsys):
        doc = tmp_path / "doc.bin"
        doc.write_bytes(b"contract body")
        sig = tmp_path / "doc.sig"
        cli.main(["sign", "--in", str(doc), "--key", str(keyfiles["alice.key"]), "--out", str(sig)])
        doc.write_bytes(b"contract body, amended")
        capsys.readouterr()
        code = cli.main([
            "verify", "--in", str(doc), "--key", str(keyfiles["alice.pub"]), "--sig", str(sig),
        ])
        assert code == 2
        assert "signature" in capsys.readouterr().err


class TestUsage:
    def test_no_arguments(self, capsys):
        assert cli.main([]) == 1

    def test_unknown_subcommand(self, capsys):
        assert cli.main(["frobnicate"]) == 1

    def test_unknown_flag(self, capsys):
        assert cli.main(["keygen", "--bogus"]) == 1
        assert "error" in capsys.readouterr().err

    def test_missing_required_flag(self, capsys):
        assert cli.main(["seal", "--in", "x"]) == 1

    def test_missing_input_file(self, tmp_path, keyfiles, capsys):
        code = cli.main([
            "seal", "--in", str(tmp_path / "nope.txt"), "--out", str(tmp_path / "o"),
            "--to", str(keyfiles["bob.pub"]), "--from", str(keyfiles["alice.key"]),
        ])
        assert code == 1

    def test_help_exits_zero(self, capsys):
        assert cli.main(["--help"]) == 0
        assert "keygen" in capsys.readouterr().out


class TestBenchCommand:
    def test_writes_csv(self, tmp_path, capsys, monkeypatch):
        # patch the key size down so the functional test stays quick
        orig = bench.run_bench
        monkeypatch.setattr(
            bench, "run_bench",
            lambda sizes: orig(sizes, repetitions=1, rsa_bits=512),
        )
        out = tmp_path / "bench.csv"
        assert cli.main(["bench", "--sizes", "2048,4096", "--out", str(out)]) == 0
        records = bench.read_csv(out)
        assert len(records) == 6
        stdout = capsys.readouterr().out
        assert "hill_only" in stdout and "rsa_only" in stdout and "hybrid" in stdout

    def test_bad_sizes_is_usage_error(self, tmp_path, capsys):
        assert cli.main(["bench", "--sizes", "12no", "--out", str(tmp_path / "b.csv")]) == 1
        assert cli.main(["bench", "--sizes", "10", "--out", str(tmp_path / "b.csv")]) == 1


class TestSendRecv:
    def test_end_to_end_over_subprocess_server(self, tmp_path, keyfiles, capsys):
        out_dir = tmp_path / "inbox"
        trust = tmp_path / "trust"
        trust.mkdir()
        (trust / "alice.pub").write_bytes(keyfiles["alice.pub"].read_bytes())

        proc = subprocess.Popen(
            [
                sys.executable, "-m", "hcie", "recv",
                "--port", "0", "--out-dir", str(out_dir),
                "--key", str(keyfiles["bob.key"]), "--trust", str(trust),
            ],
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
        )
        try:
            line = proc.stdout.readline()
            match = re.search(r"listening on port (\d+)", line)
            assert match, f"unexpected server banner: {line!r}"
            port = int(match.group(1))

            src = tmp_path / "wire.bin"
            src.write_bytes(b"over the wire" * 1000)
            code = cli.main([
                "send", "--host", "127.0.0.1", "--port", str(port), "--file", str(src),
                "--to", str(keyfiles["bob.pub"]), "--from", str(keyfiles["alice.key"]),
            ])
            assert code == 0
            assert "server digest" in capsys.readouterr().out
            assert (out_dir / "wire.bin").read_bytes() == b"over the wire" * 1000
        finally:
            proc.terminate()
            proc.wait(timeout=10)

    def test_send_to_dead_port_fails(self, tmp_path, keyfiles, capsys):
        src = tmp_path / "x.bin"
        src.write_bytes(b"x")
        code = cli.main([
            "send", "--host", "127.0.0.1", "--port", "1", "--file", str(src),
            "--to", str(keyfiles["bob.pub"]), "--from", str(keyfiles["alice.key"]),
        ])
        assert code == 1  # refused connection surfaces as an I/O error


class TestEntryPoints:
    def test_console_script(self):
        out = subprocess.run(
            ["hcie", "--help"], capture_output=True, text=True, timeout=30
        )
        assert out.returncode == 0
        assert "seal" in out.stdout

    def test_python_dash_m(self):
        out = subprocess.run(
            [sys.executable, "-m", "hcie", "--help"],
            capture_output=True, text=True, timeout=30,
        )
        assert out.returncode == 0
