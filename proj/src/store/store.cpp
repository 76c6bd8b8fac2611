// Copyright 2026 The shoplist Authors
// SPDX-License-Identifier: Apache-2.0
#include "shoplist/store/store.hpp"

#include "codec.hpp"
#include "shoplist/error.hpp"

#include <openssl/evp.h>
#include <zlib.h>

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstring>
#include <map>
#include <random>

namespace shoplist::store {
namespace {

constexpr std::array<char, 4> kMagic{'S', 'L', 'D', 'F'};
constexpr std::array<char, 4> kTrailerMagic{'S', 'L', 'T', 'R'};
constexpr std::size_t kTrailerSize = 12;

enum class FrameKind : std::uint8_t {
    RowPut = 1,
    RowErase = 2,
    MetaPut = 3,
    MetaErase = 4,
    TableCreate = 5,
    TableDrop = 6,
};

using Salt = std::array<std::uint8_t, 16>;
using Digest = std::array<std::uint8_t, 32>;

[[noreturn]] void throw_errno(const std::string& what) {
    throw Error(ErrorCode::IoFailure, what + ": " + std::strerror(errno));
}

Digest password_digest(const Salt& salt, std::string_view password) {
    Digest out{};
    if (password.empty()) return out;
    std::string input(reinterpret_cast<const char*>(salt.data()), salt.size());
    input.append(password);
    unsigned int len = 0;
    if (EVP_Digest(input.data(), input.size(), out.data(), &len, EVP_sha256(), nullptr) != 1 ||
        len != out.size()) {
        throw Error(ErrorCode::IoFailure, "sha256 failed");
    }
    return out;
}

template <std::size_t N>
std::array<std::uint8_t, N> random_bytes() {
    std::random_device rd;
    std::array<std::uint8_t, N> out{};
    for (auto& b : out) b = static_cast<std::uint8_t>(rd() & 0xff);
    return out;
}

void write_all(int fd, std::string_view data, off_t offset) {
    while (!data.empty()) {
        ssize_t n = ::pwrite(fd, data.data(), data.size(), offset);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw_errno("write");
        }
        data.remove_prefix(static_cast<std::size_t>(n));
        offset += n;
    }
}

std::string read_all(int fd) {
    std::string out;
    char buf[65536];
    off_t offset = 0;
    for (;;) {
        ssize_t n = ::pread(fd, buf, sizeof buf, offset);
        if (n < 0) {
            if (errno == EINTR) continue;
            throw_errno("read");
        }
        if (n == 0) break;
        out.append(buf, static_cast<std::size_t>(n));
        offset += n;
    }
    return out;
}

std::string trailer(std::uint64_t log_len) {
    detail::ByteWriter w;
    w.u64(log_len);
    w.buffer().append(kTrailerMagic.data(), kTrailerMagic.size());
    return w.take();
}

std::string frame(std::string_view payload) {
    detail::ByteWriter w;
    w.u32(static_cast<std::uint32_t>(payload.size()));
    w.buffer().append(payload);
    w.u32(static_cast<std::uint32_t>(
        ::crc32(0L, reinterpret_cast<const Bytef*>(payload.data()), static_cast<uInt>(payload.size()))));
    return w.take();
}

struct TableState {
    TableDef def;
    std::size_t pk = 0;
    std::map<std::int64_t, Row> rows;
    std::int64_t next_id = 1;
};

} // namespace

ReplicaId ReplicaId::random() { return ReplicaId{random_bytes<16>()}; }

std::optional<ReplicaId> ReplicaId::from_hex(std::string_view hex) {
    if (hex.size() != 32) return std::nullopt;
    ReplicaId id;
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    for (std::size_t i = 0; i < 16; ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) return std::nullopt;
        id.bytes[i] = static_cast<std::uint8_t>(hi * 16 + lo);
    }
    return id;
}

std::string ReplicaId::hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(32);
    for (auto b : bytes) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0xf]);
    }
    return out;
}

WallClock system_wall_clock() {
    return [] {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    };
}

std::string_view to_string(ChangeOp op) {
    switch (op) {
    case ChangeOp::Insert: return "insert";
    case ChangeOp::Update: return "update";
    case ChangeOp::Delete: return "delete";
    }
    return "?";
}

std::optional<ChangeOp> change_op_from_string(std::string_view name) {
    if (name == "insert") return ChangeOp::Insert;
    if (name == "update") return ChangeOp::Update;
    if (name == "delete") return ChangeOp::Delete;
    return std::nullopt;
}

struct Store::Impl {
    std::filesystem::path path;
    int fd = -1;
    StoreOptions options;
    Salt salt{};
    Digest digest{};
    ReplicaId replica;

    std::vector<std::shared_ptr<TableState>> tables;
    std::map<std::string, std::string, std::less<>> meta;

    std::uint64_t log_start = 0;
    std::uint64_t log_len = 0;

    std::string pending;
    std::vector<std::function<void()>> undo;
    int txn_depth = 0;
    ChangeHook hook;
    std::function<void()> rollback_hook;

    ~Impl() {
        if (fd >= 0) ::close(fd);
    }

    // ── lookup ────────────────────────────────────────────────────

    std::shared_ptr<TableState> find_table(std::string_view name) const {
        for (const auto& t : tables) {
            if (iequals(t->def.name, name)) return t;
        }
        return nullptr;
    }

    TableState& table(std::string_view name) const {
        auto t = find_table(name);
        if (!t) throw Error(ErrorCode::UnknownTable, std::string(name));
        return *t;
    }

    // ── commit machinery ─────────────────────────────────────────

    void append(FrameKind kind, const std::function<void(detail::ByteWriter&)>& body) {
        detail::ByteWriter w;
        w.u8(static_cast<std::uint8_t>(kind));
        body(w);
        pending += frame(w.buffer());
    }

    void rollback_to(std::size_t pending_mark, std::size_t undo_mark) {
        pending.resize(pending_mark);
        bool undone = undo.size() > undo_mark;
        while (undo.size() > undo_mark) {
            auto fn = std::move(undo.back());
            undo.pop_back();
            fn();
        }
        if (undone && rollback_hook) rollback_hook();
    }

    void commit() {
        if (pending.empty()) {
            undo.clear();
            return;
        }
        std::string out = pending;
        out += trailer(log_len + pending.size());
        write_all(fd, out, static_cast<off_t>(log_start + log_len));
        if (options.sync_each_commit && ::fsync(fd) != 0) throw_errno("fsync");
        log_len += pending.size();
        pending.clear();
        undo.clear();
    }

    /// Runs one mutation. Outside a transaction it commits immediately; on any
    /// error its in-memory effects and pending frames are undone.
    template <class F>
    auto mutate(F&& fn) {
        std::size_t pending_mark = pending.size();
        std::size_t undo_mark = undo.size();
        // Nested mutations (from the change hook) join this one.
        struct Depth {
            int& d;
            explicit Depth(int& depth) : d(depth) { ++d; }
            ~Depth() { --d; }
        };
        try {
            if constexpr (std::is_void_v<decltype(fn())>) {
                {
                    Depth depth(txn_depth);
                    fn();
                }
                if (txn_depth == 0) commit();
            } else {
                auto result = [&] {
                    Depth depth(txn_depth);
                    return fn();
                }();
                if (txn_depth == 0) commit();
                return result;
            }
        } catch (...) {
            rollback_to(pending_mark, undo_mark);
            throw;
        }
    }

    void fire(const TableState& t, std::int64_t pk, ChangeOp op, const Row* row) {
        if (hook) hook(ChangeEvent{t.def.name, pk, op, row});
    }

    // ── row validation ───────────────────────────────────────────

    void normalize(const TableState& t, Row& row, std::int64_t now) const {
        const auto& cols = t.def.columns;
        if (row.values.size() != cols.size()) {
            throw Error(ErrorCode::TypeMismatch,
                        t.def.name + " expects " + std::to_string(cols.size()) + " values, got " +
                            std::to_string(row.values.size()));
        }
        for (std::size_t i = 0; i < cols.size(); ++i) {
            const auto& col = cols[i];
            auto& cell = row.values[i];
            auto coerced = coerce(cell, col.kind);
            if (!coerced) {
                throw Error(ErrorCode::TypeMismatch,
                            t.def.name + "." + col.name + " expects " +
                                std::string(to_string(col.kind)) + ", got '" + to_display(cell) + "'");
            }
            cell = std::move(*coerced);
            if (is_null(cell)) {
                if (col.default_now) {
                    cell = Timestamp{now};
                } else if (col.default_value) {
                    cell = *col.default_value;
                }
            }
            if (is_null(cell) && !col.nullable) {
                throw Error(ErrorCode::NullViolation, t.def.name + "." + col.name + " is not nullable");
            }
            if (col.non_negative) {
                bool negative = false;
                if (auto* d = std::get_if<Decimal>(&cell)) negative = d->scaled() < 0;
                if (auto* n = std::get_if<std::int64_t>(&cell)) negative = *n < 0;
                if (negative) {
                    throw Error(ErrorCode::CheckViolation, t.def.name + "." + col.name + " must be >= 0");
                }
            }
        }
    }

    void check_integrity(const TableState& t, const Row& row, std::int64_t pk) const {
        const auto& cols = t.def.columns;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            const auto& col = cols[i];
            const auto& cell = row.values[i];
            if (is_null(cell)) continue;
            if (!col.references.empty()) {
                auto target = find_table(col.references);
                auto ref = std::get<std::int64_t>(cell);
                if (!target || !target->rows.contains(ref)) {
                    throw Error(ErrorCode::ForeignKeyViolation,
                                t.def.name + "." + col.name + " = " + std::to_string(ref) +
                                    " has no row in " + col.references);
                }
            }
            if (col.unique) {
                for (const auto& [other_pk, other] : t.rows) {
                    if (other_pk != pk && other.values[i] == cell) {
                        throw Error(ErrorCode::UniqueViolation,
                                    t.def.name + "." + col.name + " '" + to_display(cell) +
                                        "' already exists");
                    }
                }
            }
        }
    }

    /// Throws when another table holds a reference to `pk` in `t`.
    void check_unreferenced(const TableState& t, std::int64_t pk) const {
        for (const auto& other : tables) {
            for (std::size_t i = 0; i < other->def.columns.size(); ++i) {
                if (!iequals(other->def.columns[i].references, t.def.name)) continue;
                for (const auto& [opk, orow] : other->rows) {
                    auto* ref = std::get_if<std::int64_t>(&orow.values[i]);
                    if (ref && *ref == pk) {
                        throw Error(ErrorCode::ForeignKeyViolation,
                                    t.def.name + " row " + std::to_string(pk) + " is referenced by " +
                                        other->def.name + " row " + std::to_string(opk));
                    }
                }
            }
        }
    }

    // ── in-memory mutations with undo + log ──────────────────────

    void store_row(const std::shared_ptr<TableState>& t, std::int64_t pk, Row row) {
        auto it = t->rows.find(pk);
        std::optional<Row> old;
        if (it != t->rows.end()) old = it->second;
        std::int64_t old_next = t->next_id;
        t->rows[pk] = std::move(row);
        t->next_id = std::max(t->next_id, pk + 1);
        undo.emplace_back([t, pk, old = std::move(old), old_next]() mutable {
            if (old) {
                t->rows[pk] = std::move(*old);
            } else {
                t->rows.erase(pk);
            }
            t->next_id = old_next;
        });
        const Row& stored = t->rows[pk];
        append(FrameKind::RowPut, [&](detail::ByteWriter& w) {
            w.str(t->def.name);
            w.row(stored);
        });
    }

    void remove_row(const std::shared_ptr<TableState>& t, std::int64_t pk) {
        auto it = t->rows.find(pk);
        Row old = std::move(it->second);
        t->rows.erase(it);
        undo.emplace_back([t, pk, old = std::move(old)]() mutable { t->rows[pk] = std::move(old); });
        append(FrameKind::RowErase, [&](detail::ByteWriter& w) {
            w.str(t->def.name);
            w.i64(pk);
        });
    }

    // ── replay ───────────────────────────────────────────────────

    void replay_frame(std::string_view payload) {
        detail::ByteReader r(payload);
        auto kind = static_cast<FrameKind>(r.u8());
        switch (kind) {
        case FrameKind::RowPut: {
            auto& t = table(r.str());
            Row row = r.row(t.def.columns.size());
            auto pk = std::get<std::int64_t>(row.values[t.pk]);
            t.rows[pk] = std::move(row);
            t.next_id = std::max(t.next_id, pk + 1);
            break;
        }
        case FrameKind::RowErase: {
            auto& t = table(r.str());
            t.rows.erase(r.i64());
            break;
        }
        case FrameKind::MetaPut: {
            auto key = r.str();
            meta[key] = r.str();
            break;
        }
        case FrameKind::MetaErase:
            meta.erase(r.str());
            break;
        case FrameKind::TableCreate: {
            auto ts = std::make_shared<TableState>();
            ts->def = r.table_def();
            ts->pk = ts->def.pk_index();
            ts->next_id = r.i64();
            tables.push_back(std::move(ts));
            break;
        }
        case FrameKind::TableDrop: {
            auto name = r.str();
            std::erase_if(tables, [&](const auto& t) { return iequals(t->def.name, name); });
            break;
        }
        default:
            throw Error(ErrorCode::IoFailure, "corrupt log frame");
        }
    }

    // ── file image ───────────────────────────────────────────────

    std::string header_bytes(std::size_t table_count) const {
        detail::ByteWriter w;
        w.buffer().append(kMagic.data(), kMagic.size());
        w.u16(kFormatVersion);
        w.bytes(salt);
        w.bytes(digest);
        w.bytes(replica.bytes);
        w.u16(static_cast<std::uint16_t>(table_count));
        return w.take();
    }

    /// Header, sections and an empty log with its trailer.
    std::string compact_image() const {
        detail::ByteWriter w;
        w.buffer() = header_bytes(tables.size());
        for (const auto& t : tables) {
            w.table_def(t->def);
            w.i64(t->next_id);
            w.u32(static_cast<std::uint32_t>(t->rows.size()));
            for (const auto& [pk, row] : t->rows) w.row(row);
        }
        w.u32(static_cast<std::uint32_t>(meta.size()));
        for (const auto& [k, v] : meta) {
            w.str(k);
            w.str(v);
        }
        w.buffer() += trailer(0);
        return w.take();
    }

    void load(std::string_view password) {
        std::string data = read_all(fd);
        if (data.size() < kMagic.size() || !std::equal(kMagic.begin(), kMagic.end(), data.begin())) {
            throw Error(ErrorCode::BadMagic, path.string() + " is not a store file");
        }
        detail::ByteReader r(data);
        r.u32();
        auto version = r.u16();
        if (version != kFormatVersion) {
            throw Error(ErrorCode::UnsupportedVersion, "format version " + std::to_string(version));
        }
        r.bytes(salt);
        r.bytes(digest);
        if (password_digest(salt, password) != digest) {
            throw Error(ErrorCode::BadPassword, "password does not match");
        }
        r.bytes(replica.bytes);
        auto table_count = r.u16();
        for (std::uint16_t i = 0; i < table_count; ++i) {
            auto ts = std::make_shared<TableState>();
            ts->def = r.table_def();
            ts->pk = ts->def.pk_index();
            ts->next_id = r.i64();
            auto rows = r.u32();
            for (std::uint32_t j = 0; j < rows; ++j) {
                Row row = r.row(ts->def.columns.size());
                auto pk = std::get<std::int64_t>(row.values[ts->pk]);
                ts->rows.emplace(pk, std::move(row));
            }
            tables.push_back(std::move(ts));
        }
        auto meta_count = r.u32();
        for (std::uint32_t i = 0; i < meta_count; ++i) {
            auto key = r.str();
            meta[key] = r.str();
        }
        log_start = r.position();

        std::string_view log(data);
        log.remove_prefix(log_start);
        bool clean = false;
        if (log.size() >= kTrailerSize) {
            std::string_view tail = log.substr(log.size() - kTrailerSize);
            detail::ByteReader tr(tail);
            auto committed = tr.u64();
            clean = std::equal(kTrailerMagic.begin(), kTrailerMagic.end(), tail.begin() + 8) &&
                    committed == log.size() - kTrailerSize;
        }

        // Walk frames; a torn tail (crash mid-append) stops the walk at the
        // last frame whose checksum holds.
        std::size_t pos = 0;
        std::size_t limit = clean ? log.size() - kTrailerSize : log.size();
        while (limit - pos >= 8) {
            detail::ByteReader fr(log.substr(pos, 4));
            auto len = fr.u32();
            if (limit - pos < 8 + static_cast<std::size_t>(len)) break;
            std::string_view payload = log.substr(pos + 4, len);
            detail::ByteReader cr(log.substr(pos + 4 + len, 4));
            auto crc = cr.u32();
            auto actual = static_cast<std::uint32_t>(
                ::crc32(0L, reinterpret_cast<const Bytef*>(payload.data()), static_cast<uInt>(len)));
            if (crc != actual) {
                if (clean) throw Error(ErrorCode::IoFailure, "log frame checksum mismatch");
                break;
            }
            replay_frame(payload);
            pos += 8 + len;
        }
        log_len = pos;
        if (!clean) {
            write_all(fd, trailer(log_len), static_cast<off_t>(log_start + log_len));
            if (::ftruncate(fd, static_cast<off_t>(log_start + log_len + kTrailerSize)) != 0) {
                throw_errno("truncate");
            }
        }
    }

    void close_file() {
        std::string image = compact_image();
        auto tmp = path;
        tmp += ".compact";
        int out = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
        if (out < 0) throw_errno("open " + tmp.string());
        try {
            write_all(out, image, 0);
            if (::fsync(out) != 0) throw_errno("fsync");
        } catch (...) {
            ::close(out);
            ::unlink(tmp.c_str());
            throw;
        }
        ::close(out);
        std::filesystem::rename(tmp, path);
        auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
        int dfd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
        if (dfd >= 0) {
            ::fsync(dfd);
            ::close(dfd);
        }
        ::close(fd);
        fd = -1;
    }
};

namespace {

int open_locked(const std::filesystem::path& path, int flags) {
    int fd = ::open(path.c_str(), flags | O_CLOEXEC, 0644);
    if (fd < 0) {
        if (errno == EEXIST) throw Error(ErrorCode::FileExists, path.string());
        throw_errno("open " + path.string());
    }
    if (::flock(fd, LOCK_EX | LOCK_NB) != 0) {
        ::close(fd);
        throw Error(ErrorCode::Locked, path.string() + " is open elsewhere");
    }
    return fd;
}

} // namespace

Store::Store(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Store::Store(Store&&) noexcept = default;
Store& Store::operator=(Store&& other) noexcept {
    if (this != &other) {
        if (is_open()) {
            try {
                close();
            } catch (...) {
            }
        }
        impl_ = std::move(other.impl_);
    }
    return *this;
}

Store::~Store() {
    if (is_open()) {
        try {
            close();
        } catch (...) {
        }
    }
}

Store::Impl& Store::impl() const {
    if (!impl_ || impl_->fd < 0) throw Error(ErrorCode::HandleClosed, "store is closed");
    return *impl_;
}

Store Store::create(const ConnectionSpec& spec, const std::vector<TableDef>& schema,
                    StoreOptions options) {
    for (const auto& def : schema) validate(def);
    for (std::size_t i = 0; i < schema.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (iequals(schema[i].name, schema[j].name)) {
                throw Error(ErrorCode::InvalidSchema, "duplicate table " + schema[i].name);
            }
        }
    }
    auto impl = std::make_unique<Impl>();
    impl->path = spec.data_source;
    impl->options = std::move(options);
    if (!impl->options.clock) impl->options.clock = system_wall_clock();
    impl->salt = random_bytes<16>();
    impl->digest = password_digest(impl->salt, spec.password);
    impl->replica = ReplicaId::random();
    for (const auto& def : schema) {
        auto ts = std::make_shared<TableState>();
        ts->def = def;
        ts->pk = def.pk_index();
        impl->tables.push_back(std::move(ts));
    }
    impl->fd = open_locked(impl->path, O_RDWR | O_CREAT | O_EXCL);
    try {
        std::string image = impl->compact_image();
        write_all(impl->fd, image, 0);
        if (::fsync(impl->fd) != 0) throw_errno("fsync");
        impl->log_start = image.size() - kTrailerSize;
    } catch (...) {
        ::unlink(impl->path.c_str());
        throw;
    }
    return Store(std::move(impl));
}

Store Store::open(const ConnectionSpec& spec, StoreOptions options) {
    auto impl = std::make_unique<Impl>();
    impl->path = spec.data_source;
    impl->options = std::move(options);
    if (!impl->options.clock) impl->options.clock = system_wall_clock();
    if (!std::filesystem::exists(impl->path)) {
        throw Error(ErrorCode::IoFailure, impl->path.string() + " does not exist");
    }
    impl->fd = open_locked(impl->path, O_RDWR);
    impl->load(spec.password);
    return Store(std::move(impl));
}

bool Store::is_open() const { return impl_ && impl_->fd >= 0; }
const std::filesystem::path& Store::path() const { return impl().path; }
const ReplicaId& Store::replica_id() const { return impl().replica; }
std::int64_t Store::now() const { return impl().options.clock(); }

std::vector<std::string> Store::table_names() const {
    std::vector<std::string> out;
    for (const auto& t : impl().tables) out.push_back(t->def.name);
    return out;
}

bool Store::has_table(std::string_view table) const { return impl().find_table(table) != nullptr; }

const TableDef& Store::table_def(std::string_view table) const { return impl().table(table).def; }

std::vector<TableDef> Store::schema() const {
    std::vector<TableDef> out;
    for (const auto& t : impl().tables) out.push_back(t->def);
    return out;
}

void Store::create_table(const TableDef& def) {
    auto& im = impl();
    validate(def);
    if (im.find_table(def.name)) throw Error(ErrorCode::TableExists, def.name);
    im.mutate([&] {
        auto ts = std::make_shared<TableState>();
        ts->def = def;
        ts->pk = def.pk_index();
        im.tables.push_back(ts);
        im.undo.emplace_back([&im, ts] { std::erase(im.tables, ts); });
        im.append(FrameKind::TableCreate, [&](detail::ByteWriter& w) {
            w.table_def(def);
            w.i64(ts->next_id);
        });
    });
}

void Store::drop_table(std::string_view table) {
    auto& im = impl();
    auto ts = im.find_table(table);
    if (!ts) throw Error(ErrorCode::UnknownTable, std::string(table));
    for (const auto& other : im.tables) {
        if (other == ts) continue;
        for (std::size_t i = 0; i < other->def.columns.size(); ++i) {
            if (!iequals(other->def.columns[i].references, ts->def.name)) continue;
            for (const auto& [pk, row] : other->rows) {
                if (!is_null(row.values[i])) {
                    throw Error(ErrorCode::ForeignKeyViolation,
                                ts->def.name + " is referenced by " + other->def.name);
                }
            }
        }
    }
    im.mutate([&] {
        auto pos = std::find(im.tables.begin(), im.tables.end(), ts) - im.tables.begin();
        im.tables.erase(im.tables.begin() + pos);
        im.undo.emplace_back([&im, ts, pos] { im.tables.insert(im.tables.begin() + pos, ts); });
        im.append(FrameKind::TableDrop, [&](detail::ByteWriter& w) { w.str(ts->def.name); });
    });
}

std::int64_t Store::insert_row(std::string_view table, Row row) {
    auto& im = impl();
    auto ts = im.find_table(table);
    if (!ts) throw Error(ErrorCode::UnknownTable, std::string(table));
    if (row.values.size() != ts->def.columns.size()) {
        throw Error(ErrorCode::TypeMismatch, ts->def.name + " expects " +
                                                 std::to_string(ts->def.columns.size()) + " values");
    }
    auto& pk_cell = row.values[ts->pk];
    auto pk_value = coerce(pk_cell, ColumnKind::Integer);
    if (!pk_value) throw Error(ErrorCode::TypeMismatch, "primary key must be an integer");
    std::int64_t pk;
    if (is_null(*pk_value)) {
        pk = ts->next_id;
    } else {
        pk = std::get<std::int64_t>(*pk_value);
        if (ts->rows.contains(pk)) {
            throw Error(ErrorCode::DuplicateKey, ts->def.name + " already has key " + std::to_string(pk));
        }
    }
    pk_cell = pk;
    im.normalize(*ts, row, im.options.clock());
    im.check_integrity(*ts, row, pk);
    return im.mutate([&] {
        im.store_row(ts, pk, std::move(row));
        im.fire(*ts, pk, ChangeOp::Insert, &ts->rows.at(pk));
        return pk;
    });
}

bool Store::update_row(std::string_view table, std::int64_t pk,
                       std::span<const Assignment> assignments) {
    auto& im = impl();
    auto ts = im.find_table(table);
    if (!ts) throw Error(ErrorCode::UnknownTable, std::string(table));
    std::vector<std::pair<std::size_t, const Value*>> resolved;
    for (const auto& a : assignments) {
        auto idx = ts->def.find_column(a.column);
        if (!idx) throw Error(ErrorCode::UnknownColumn, ts->def.name + "." + a.column);
        if (*idx == ts->pk) throw Error(ErrorCode::CheckViolation, "primary key is immutable");
        resolved.emplace_back(*idx, &a.value);
    }
    auto it = ts->rows.find(pk);
    if (it == ts->rows.end()) return false;
    Row row = it->second;
    for (auto [idx, value] : resolved) {
        auto coerced = coerce(*value, ts->def.columns[idx].kind);
        if (!coerced) {
            throw Error(ErrorCode::TypeMismatch, ts->def.name + "." + ts->def.columns[idx].name +
                                                     " expects " +
                                                     std::string(to_string(ts->def.columns[idx].kind)));
        }
        // Explicit NULL into a non-null column must not fall back to the default.
        if (is_null(*coerced) && !ts->def.columns[idx].nullable) {
            throw Error(ErrorCode::NullViolation, ts->def.name + "." + ts->def.columns[idx].name +
                                                      " is not nullable");
        }
        row.values[idx] = std::move(*coerced);
    }
    im.normalize(*ts, row, im.options.clock());
    im.check_integrity(*ts, row, pk);
    return im.mutate([&] {
        im.store_row(ts, pk, std::move(row));
        im.fire(*ts, pk, ChangeOp::Update, &ts->rows.at(pk));
        return true;
    });
}

bool Store::delete_row(std::string_view table, std::int64_t pk) {
    auto& im = impl();
    auto ts = im.find_table(table);
    if (!ts) throw Error(ErrorCode::UnknownTable, std::string(table));
    if (!ts->rows.contains(pk)) return false;
    im.check_unreferenced(*ts, pk);
    return im.mutate([&] {
        im.remove_row(ts, pk);
        im.fire(*ts, pk, ChangeOp::Delete, nullptr);
        return true;
    });
}

std::vector<Row> Store::scan(std::string_view table, const std::optional<Predicate>& predicate) const {
    const auto& t = impl().table(table);
    std::vector<Row> out;
    if (!predicate) {
        out.reserve(t.rows.size());
        for (const auto& [pk, row] : t.rows) out.push_back(row);
        return out;
    }
    auto idx = t.def.find_column(predicate->column);
    if (!idx) throw Error(ErrorCode::UnknownColumn, t.def.name + "." + predicate->column);
    auto literal = coerce(predicate->literal, t.def.columns[*idx].kind);
    if (!literal) {
        throw Error(ErrorCode::TypeMismatch,
                    "cannot compare " + t.def.columns[*idx].name + " with '" +
                        to_display(predicate->literal) + "'");
    }
    for (const auto& [pk, row] : t.rows) {
        if (compare(row.values[*idx], predicate->op, *literal)) out.push_back(row);
    }
    return out;
}

std::optional<Row> Store::find(std::string_view table, std::int64_t pk) const {
    const auto& t = impl().table(table);
    auto it = t.rows.find(pk);
    if (it == t.rows.end()) return std::nullopt;
    return it->second;
}

std::size_t Store::row_count(std::string_view table) const { return impl().table(table).rows.size(); }

std::int64_t Store::next_id(std::string_view table) const { return impl().table(table).next_id; }

void Store::put_row(std::string_view table, Row row) {
    auto& im = impl();
    auto ts = im.find_table(table);
    if (!ts) throw Error(ErrorCode::UnknownTable, std::string(table));
    if (row.values.size() != ts->def.columns.size()) {
        throw Error(ErrorCode::TypeMismatch, ts->def.name + " expects " +
                                                 std::to_string(ts->def.columns.size()) + " values");
    }
    auto pk_value = coerce(row.values[ts->pk], ColumnKind::Integer);
    if (!pk_value || is_null(*pk_value)) {
        throw Error(ErrorCode::TypeMismatch, "put_row needs an explicit integer key");
    }
    auto pk = std::get<std::int64_t>(*pk_value);
    row.values[ts->pk] = pk;
    im.normalize(*ts, row, im.options.clock());
    im.check_integrity(*ts, row, pk);
    im.mutate([&] { im.store_row(ts, pk, std::move(row)); });
}

bool Store::erase_row(std::string_view table, std::int64_t pk) {
    auto& im = impl();
    auto ts = im.find_table(table);
    if (!ts) throw Error(ErrorCode::UnknownTable, std::string(table));
    if (!ts->rows.contains(pk)) return false;
    im.check_unreferenced(*ts, pk);
    im.mutate([&] { im.remove_row(ts, pk); });
    return true;
}

std::optional<std::string> Store::meta_get(std::string_view key) const {
    const auto& im = impl();
    auto it = im.meta.find(key);
    if (it == im.meta.end()) return std::nullopt;
    return it->second;
}

void Store::meta_put(std::string_view key, std::string_view value) {
    auto& im = impl();
    im.mutate([&] {
        std::string k(key);
        std::optional<std::string> old;
        if (auto it = im.meta.find(k); it != im.meta.end()) old = it->second;
        im.meta[k] = std::string(value);
        im.undo.emplace_back([&im, k, old] {
            if (old) {
                im.meta[k] = *old;
            } else {
                im.meta.erase(k);
            }
        });
        im.append(FrameKind::MetaPut, [&](detail::ByteWriter& w) {
            w.str(key);
            w.str(value);
        });
    });
}

void Store::meta_erase(std::string_view key) {
    auto& im = impl();
    auto it = im.meta.find(key);
    if (it == im.meta.end()) return;
    im.mutate([&] {
        std::string k(key);
        std::string old = std::move(it->second);
        im.meta.erase(it);
        im.undo.emplace_back([&im, k, old] { im.meta[k] = old; });
        im.append(FrameKind::MetaErase, [&](detail::ByteWriter& w) { w.str(key); });
    });
}

std::vector<std::pair<std::string, std::string>> Store::meta_scan(std::string_view prefix) const {
    const auto& im = impl();
    std::vector<std::pair<std::string, std::string>> out;
    for (auto it = im.meta.lower_bound(prefix); it != im.meta.end(); ++it) {
        if (it->first.compare(0, prefix.size(), prefix) != 0) break;
        out.emplace_back(it->first, it->second);
    }
    return out;
}

void Store::set_change_hook(ChangeHook hook) { impl().hook = std::move(hook); }

void Store::set_rollback_hook(std::function<void()> hook) { impl().rollback_hook = std::move(hook); }

void Store::close() {
    auto& im = impl();
    if (im.txn_depth > 0) im.rollback_to(0, 0);
    im.txn_depth = 0;
    im.close_file();
}

Store::Transaction::Transaction(Store& store) : store_(&store) {
    auto& im = store.impl();
    pending_mark_ = im.pending.size();
    undo_mark_ = im.undo.size();
    ++im.txn_depth;
}

Store::Transaction::~Transaction() {
    if (done_ || !store_->is_open()) return;
    auto& im = *store_->impl_;
    --im.txn_depth;
    im.rollback_to(pending_mark_, undo_mark_);
}

void Store::Transaction::commit() {
    if (done_) return;
    done_ = true;
    auto& im = store_->impl();
    if (--im.txn_depth > 0) return;
    try {
        im.commit();
    } catch (...) {
        im.rollback_to(0, 0);
        throw;
    }
}

} // namespace shoplist::store
