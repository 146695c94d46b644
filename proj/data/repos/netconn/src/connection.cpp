#include <cerrno>
#include <fcntl.h>
#include <poll.h>
#include <unistd.h>

namespace net {

int ReadFully(int fd, char* buf, int len) {
  int done = 0;
  while (done < len) {
    int n = read(fd, buf + done, len - done);
    if (n < 0) {
      if (errno == EINTR) {
        continue;
      }
      return -1;
    }
    if (n == 0) {
      break;
    }
    done += n;
  }
  return done;
}

bool WaitWritable(int fd, int timeout_ms) {
  struct pollfd pfd;
  pfd.fd = fd;
  pfd.events = POLLOUT;
  pfd.revents = 0;
  int ret = poll(&pfd, 1, timeout_ms);
  if (ret <= 0) {
    return false;
  }
  return (pfd.revents & POLLOUT) != 0;
}

int SetNonBlocking(int fd) {
  int flags = fcntl(fd, F_GETFL, 0);
  if (flags < 0) {
    return -1;
  }
  return fcntl(fd, F_SETFL, flags | O_NONBLOCK);
}

}  // namespace net
