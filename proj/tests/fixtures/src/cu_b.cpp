// Second translation unit: Thread matches cu_a, Foo does not, and Opaque is
// only defined here.
struct Thread {
  int tid;
  void* name;
};

struct Foo {
  int a;
  int b;
  int c;
  int d;
  int e;
};

struct Opaque {
  long x;
};

Thread g_thread_b;
Foo g_foo_b;
Opaque g_opaque_b;
