#!/usr/bin/env python3
"""Writes the reconstruction scenarios under scenarios/."""
import json
import pathlib

OUT = pathlib.Path(__file__).resolve().parent.parent / "scenarios"

CATALOG = {
    "version": 1,
    "vnfs": [
        {"name": "firewall", "cpu_per_request": 0.03125, "base_service_time_ms": 2.0, "memory_mb": 128},
        {"name": "nat", "cpu_per_request": 0.015625, "base_service_time_ms": 1.0, "memory_mb": 64},
        {"name": "ids", "cpu_per_request": 0.0625, "base_service_time_ms": 6.0, "memory_mb": 256},
        {"name": "load-balancer", "cpu_per_request": 0.046875, "base_service_time_ms": 1.5, "memory_mb": 128},
        {"name": "cache", "cpu_per_request": 0.078125, "base_service_time_ms": 4.0, "memory_mb": 256},
        {"name": "compressor", "cpu_per_request": 0.09375, "base_service_time_ms": 8.0, "memory_mb": 192},
        {"name": "rate-limiter", "cpu_per_request": 0.0234375, "base_service_time_ms": 1.25, "memory_mb": 64},
    ],
}

TRAFFIC = [
    {"start_s": 0, "end_s": 20, "rps": 4},
    {"start_s": 20, "end_s": 40, "rps": 8},
    {"start_s": 40, "end_s": 60, "rps": 6},
]


def template(ident, chain):
    return {"id": ident, "chain": chain, "bandwidth_mbps": 5, "request_size_bits": 80000, "traffic": TRAFFIC}


TEMPLATES = {
    "version": 1,
    "sfcrs": [
        template("web", ["load-balancer", "cache", "firewall"]),
        template("inspect", ["ids", "nat"]),
        template("edge", ["firewall", "nat"]),
        template("secure", ["ids", "compressor", "rate-limiter", "firewall"]),
    ],
}


def network(cpus):
    compute = [f"h{i:02d}" for i in range(1, 11)]
    hosts = [{"id": "tg", "cpus": 1, "memory_mb": 4096}]
    hosts += [{"id": h, "cpus": cpus, "memory_mb": 4096} for h in compute]
    hosts.append({"id": "server", "cpus": 1, "memory_mb": 4096})
    links = [
        {"a": "tg", "b": "core", "bandwidth_mbps": 1000, "delay_ms": 0.5},
        {"a": "server", "b": "core", "bandwidth_mbps": 1000, "delay_ms": 0.5},
        {"a": "agg1", "b": "core", "bandwidth_mbps": 10000, "delay_ms": 1.0},
        {"a": "agg2", "b": "core", "bandwidth_mbps": 10000, "delay_ms": 1.0},
    ]
    for i, h in enumerate(compute):
        links.append({"a": h, "b": "agg1" if i < 5 else "agg2", "bandwidth_mbps": 1000, "delay_ms": 0.5})
    return {
        "hosts": hosts,
        "switches": ["core", "agg1", "agg2"],
        "links": links,
        "ingress_node": "tg",
        "egress_host": "server",
    }


ENGINE = {"duration_s": 60, "sample_interval_s": 1, "jitter_sigma": 0.05, "idle_spike_prob": 0.01,
          "idle_spike_range": [0.05, 0.15]}


def experiment(cpus, duplicates):
    return {
        "network": f"network_{cpus}cpu.json",
        "catalog": "catalog.json",
        "sfcrs": "templates.json",
        "duplicates": duplicates,
        "solver": {"kind": "simple-dijkstra"},
        "engine": ENGINE,
        "output": {"directory": "results", "formats": "both", "bin_width_ms": 5},
        "seed": 2024,
    }


def ga_small():
    # Four single-core hosts on one switch, increasingly far from it. Small
    # enough to enumerate every placement.
    delays = [0.5, 2.0, 4.0, 8.0]
    hosts = [{"id": "tg", "cpus": 1, "memory_mb": 4096}]
    hosts += [{"id": f"c{i}", "cpus": 1, "memory_mb": 2048} for i in range(1, 5)]
    hosts.append({"id": "server", "cpus": 1, "memory_mb": 4096})
    links = [
        {"a": "tg", "b": "s1", "bandwidth_mbps": 1000, "delay_ms": 0.5},
        {"a": "server", "b": "s1", "bandwidth_mbps": 1000, "delay_ms": 0.5},
    ]
    links += [{"a": f"c{i}", "b": "s1", "bandwidth_mbps": 1000, "delay_ms": d} for i, d in enumerate(delays, 1)]
    chains = [("a", ["ids", "nat"], 5), ("b", ["cache", "firewall"], 4), ("c", ["compressor", "rate-limiter"], 5),
              ("d", ["load-balancer", "firewall"], 4), ("e", ["nat", "rate-limiter"], 5)]
    sfcrs = [{"id": i, "chain": c, "bandwidth_mbps": 5, "request_size_bits": 80000,
              "traffic": [{"start_s": 0, "end_s": 20, "rps": r}]} for i, c, r in chains]
    return {
        "network": {"hosts": hosts, "switches": ["s1"], "links": links, "ingress_node": "tg",
                    "egress_host": "server"},
        "catalog": "catalog.json",
        "sfcrs": sfcrs,
        "duplicates": 1,
        "solver": {"kind": "ga", "ga": {"population": 20, "generations": 10, "tournament_k": 3,
                                        "crossover_rate": 0.9, "elitism": 2}},
        "engine": {"duration_s": 20, "sample_interval_s": 1, "jitter_sigma": 0.05},
        "output": {"directory": "results", "formats": "both", "bin_width_ms": 5},
        "seed": 1,
    }


def write(name, doc):
    (OUT / name).write_text(json.dumps(doc, indent=2) + "\n")


def main():
    OUT.mkdir(exist_ok=True)
    write("catalog.json", CATALOG)
    write("templates.json", TEMPLATES)
    write("network_2cpu.json", network(2))
    write("network_4cpu.json", network(4))
    n = 1
    for cpus in (2, 4):
        for dup in (1, 2, 4, 8):
            write(f"exp{n}.json", experiment(cpus, dup))
            n += 1
    write("ga_small.json", ga_small())


if __name__ == "__main__":
    main()
