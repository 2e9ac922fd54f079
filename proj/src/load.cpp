#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "deliverai/error.hpp"
#include "deliverai/rng.hpp"
#include "deliverai/simulator.hpp"

namespace deliverai {

const char* to_string(LoadKind kind) { return kind == LoadKind::uniform ? "uniform" : "gaussian"; }

LoadKind load_kind_from_string(const std::string& s) {
    if (s == "uniform") return LoadKind::uniform;
    if (s == "gaussian") return LoadKind::gaussian;
    throw ValidationError("unknown load profile '" + s + "' (expected uniform or gaussian)");
}

void validate(const LoadProfile& p) {
    if (p.l0 == 0) throw ValidationError("l0 must be a positive integer");
    if (p.duration_min == 0) throw ValidationError("duration must be positive");
    if (p.kind == LoadKind::gaussian && !(p.sigma_min > 0.0)) throw ValidationError("sigma must be positive");
}

double bimodal_density(double minute, double sigma) {
    const double scale = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
    const double z1 = (minute - 15.0) / sigma;
    const double z2 = (minute - 45.0) / sigma;
    return scale * std::exp(-0.5 * z1 * z1) + scale * std::exp(-0.5 * z2 * z2);
}

std::size_t load_at(const LoadProfile& p, unsigned minute) {
    validate(p);
    if (minute >= p.duration_min) throw ValidationError("minute outside the load horizon");
    if (p.kind == LoadKind::uniform) return p.l0;
    double peak = 0.0;
    for (unsigned m = 0; m < p.duration_min; ++m) peak = std::max(peak, bimodal_density(m, p.sigma_min));
    const double scaled = bimodal_density(minute, p.sigma_min) / peak * static_cast<double>(p.l0);
    // the two modes are symmetric, so y(15) and y(45) agree only up to
    // rounding; the slack keeps the peak minutes from flooring to l0 - 1
    return static_cast<std::size_t>(std::floor(scaled + 1e-9));
}

std::vector<Delivery> generate_deliveries(const LoadProfile& profile, const City& city, std::uint64_t seed) {
    validate(profile);
    const auto producers = city.sites_of_kind(SiteKind::producer);
    const auto consumers = city.sites_of_kind(SiteKind::consumer);
    if (producers.empty() || consumers.empty()) throw ValidationError("city needs at least one producer and one consumer");

    Rng rng(seed);
    std::vector<Delivery> out;
    for (unsigned minute = 0; minute < profile.duration_min; ++minute) {
        const std::size_t count = load_at(profile, minute);
        for (std::size_t k = 0; k < count; ++k) {
            Delivery d;
            d.start_s = static_cast<Tick>(minute) * 60 + static_cast<Tick>(rng.below(60));
            const Site& producer = *producers[rng.below(producers.size())];
            const Site& consumer = *consumers[rng.below(consumers.size())];
            d.producer = producer.id;
            d.consumer = consumer.id;
            d.src = nearest_hotspot(producer.location, city);
            d.dest = nearest_hotspot(consumer.location, city);
            out.push_back(std::move(d));
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Delivery& a, const Delivery& b) { return a.start_s < b.start_s; });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<DeliveryId>(i);
    return out;
}

std::vector<Delivery> resolve_orders(const std::vector<DeliveryOrder>& orders, const City& city) {
    std::set<DeliveryId> ids;
    std::vector<Delivery> out;
    out.reserve(orders.size());
    for (const auto& o : orders) {
        if (!ids.insert(o.id).second) throw ValidationError("duplicate delivery id " + std::to_string(o.id));
        if (o.start_s < 0) throw ValidationError("delivery " + std::to_string(o.id) + " has a negative start time");
        const Site& producer = city.site(o.producer);
        const Site& consumer = city.site(o.consumer);
        if (producer.kind != SiteKind::producer) throw ValidationError("site " + o.producer + " is not a producer");
        if (consumer.kind != SiteKind::consumer) throw ValidationError("site " + o.consumer + " is not a consumer");
        out.push_back({o.id, o.producer, o.consumer, nearest_hotspot(producer.location, city),
                       nearest_hotspot(consumer.location, city), o.start_s});
    }
    std::sort(out.begin(), out.end(), [](const Delivery& a, const Delivery& b) {
        return a.start_s != b.start_s ? a.start_s < b.start_s : a.id < b.id;
    });
    return out;
}

std::vector<DeliveryOrder> to_orders(const std::vector<Delivery>& deliveries) {
    std::vector<DeliveryOrder> out;
    out.reserve(deliveries.size());
    for (const auto& d : deliveries) out.push_back({d.id, d.start_s, d.producer, d.consumer});
    return out;
}

void save_load_csv(const std::vector<DeliveryOrder>& orders, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path.string());
    out << "id,start_s,producer_id,consumer_id\n";
    for (const auto& o : orders) out << o.id << ',' << o.start_s << ',' << o.producer << ',' << o.consumer << '\n';
}

std::vector<DeliveryOrder> load_load_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot read load file " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("id,start_s,producer_id,consumer_id", 0) != 0)
        throw ValidationError(path.string() + ": expected header id,start_s,producer_id,consumer_id");
    std::vector<DeliveryOrder> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 4) throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": expected 4 columns");
        try {
            out.push_back({static_cast<DeliveryId>(std::stoul(cells[0])), std::stoll(cells[1]), cells[2], cells[3]});
        } catch (const std::logic_error&) {
            throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": malformed number");
        }
    }
    return out;
}

std::uint64_t fingerprint(const std::vector<Delivery>& deliveries) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
        h ^= 0xff;
        h *= 0x100000001b3ULL;
    };
    for (const auto& d : deliveries) {
        feed(std::to_string(d.id));
        feed(std::to_string(d.start_s));
        feed(d.producer);
        feed(d.consumer);
    }
    return h;
}

}  // namespace deliverai
